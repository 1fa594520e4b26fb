use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lexinfo::config::RunConfig;
use lexinfo::pipeline::{GroupBy, Pipeline, PlotKind, Subset};

#[derive(Parser)]
#[command(
    name = "lexinfo",
    version,
    about = "Word informativeness and context ease in reference games"
)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "lexinfo.toml")]
    config: PathBuf,
    /// Override the root seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the output directory from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsetArg {
    All,
    Repeated,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Chip,
    Speaker,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotArg {
    Denotation,
    EaseVsIw,
}

impl From<SubsetArg> for Subset {
    fn from(s: SubsetArg) -> Self {
        match s {
            SubsetArg::All => Subset::All,
            SubsetArg::Repeated => Subset::Repeated,
        }
    }
}

impl From<GroupArg> for GroupBy {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Chip => GroupBy::Chip,
            GroupArg::Speaker => GroupBy::Speaker,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load and clean the corpus; writes clean_rounds.tsv and rejects.tsv.
    Ingest,
    /// Compute word informativeness; writes word_info.{tsv,jsonl}.
    Info,
    /// Fit OLS and random-intercept models of informativeness on context ease.
    Regress {
        #[arg(long, value_enum, default_value = "all")]
        subset: SubsetArg,
        #[arg(long, value_enum, default_value = "chip")]
        group: GroupArg,
    },
    /// Simulate actual, general-only and specific-only naming systems.
    Simulate,
    /// Sample listener-study stimuli across context-ease bins.
    Stimuli {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        bins: usize,
    },
    /// Write an SVG plot.
    Plot {
        #[arg(long, value_enum)]
        kind: PlotArg,
        /// Words to draw (denotation plots), comma separated.
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
        #[arg(long, value_enum, default_value = "all")]
        subset: SubsetArg,
    },
    /// Run ingest, info, regress (both subsets), simulate and the ease plot.
    All,
}

fn run(cli: Cli) -> lexinfo::Result<()> {
    let mut cfg = RunConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    let p = Pipeline::new(cfg)?;
    match cli.command {
        Command::Ingest => ingest(&p),
        Command::Info => info(&p),
        Command::Regress { subset, group } => regress(&p, subset.into(), group.into()),
        Command::Simulate => simulate(&p),
        Command::Stimuli { n, bins } => {
            let set = p.stimuli(n, bins)?;
            println!(
                "stimuli: {} from {} eligible rounds, ease {:.2}..{:.2}",
                set.stimuli.len(),
                set.eligible,
                set.ease_min,
                set.ease_max
            );
            if !set.underpopulated_bins.is_empty() {
                eprintln!(
                    "warning: underpopulated bins {:?}; {} stimuli rebalanced from neighbouring bins",
                    set.underpopulated_bins,
                    set.stimuli.iter().filter(|s| s.rebalanced).count()
                );
            }
            Ok(())
        }
        Command::Plot {
            kind,
            words,
            subset,
        } => {
            let kind = match kind {
                PlotArg::Denotation => PlotKind::Denotation(words),
                PlotArg::EaseVsIw => PlotKind::EaseVsIw(subset.into()),
            };
            let path = p.plot(&kind)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::All => {
            ingest(&p)?;
            info(&p)?;
            regress(&p, Subset::All, GroupBy::Chip)?;
            regress(&p, Subset::Repeated, GroupBy::Chip)?;
            simulate(&p)?;
            let path = p.plot(&PlotKind::EaseVsIw(Subset::All))?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn ingest(p: &Pipeline) -> lexinfo::Result<()> {
    let s = p.ingest()?;
    println!(
        "ingest: {} rows, {} rounds, {} rejected, {} filtered, {} clean rounds, {} words at min_count {}",
        s.rows, s.rounds, s.rejects, s.filtered, s.clean_rounds, s.words, p.config.min_count
    );
    if s.rejects > 0 {
        eprintln!("warning: {} rows rejected, see rejects.tsv", s.rejects);
    }
    Ok(())
}

fn info(p: &Pipeline) -> lexinfo::Result<()> {
    let infos = p.info()?;
    println!("info: {} words", infos.len());
    for w in infos.iter().take(10) {
        println!(
            "  {:<16} I_w={:.3} chips={}{}",
            w.word,
            w.i_w,
            w.n_chips,
            if w.sampled { " (sampled)" } else { "" }
        );
    }
    Ok(())
}

fn regress(p: &Pipeline, subset: Subset, group: GroupBy) -> lexinfo::Result<()> {
    let r = p.regress(subset, group)?;
    println!("regress[{subset}, group={group}]: {} rows", r.n_rows);
    for (name, f) in [("ols", &r.ols), ("random_intercept", &r.mixed)] {
        println!(
            "  {name:<16} slope={:.5} se={:.5} t={:.2} p={:.3e} groups={}",
            f.slope, f.se_slope, f.t_slope, f.p_slope, f.n_groups
        );
        for d in &f.diagnostics {
            eprintln!("warning: {name}: {d}");
        }
    }
    Ok(())
}

fn simulate(p: &Pipeline) -> lexinfo::Result<()> {
    let r = p.simulate()?;
    println!(
        "simulate: {} referents ({} skipped, {} tied)",
        r.entries, r.skipped, r.tied
    );
    for s in &r.results {
        println!(
            "  {:<9} accuracy={:.4} I_L={:.4} interactions={} vocab={}",
            s.variant.to_string(),
            s.accuracy,
            s.i_l,
            s.n_interactions,
            s.vocab_size
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
