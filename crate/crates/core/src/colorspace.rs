//! Color representations and the CIELAB distance every other module builds on.
//!
//! sRGB is decoded with the IEC 61966-2-1 transfer curve, mapped to CIE XYZ
//! with the D65 primaries matrix, and projected to CIE 1976 L*a*b* relative to
//! the D65 white (2° observer). The reference white is taken as the row sums of
//! the primaries matrix so that sRGB white lands on (100, 0, 0) exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hue in degrees `[0, 360)`, saturation and lightness as fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HslColor {
    pub h: f64,
    pub s: f64,
    pub l: f64,
}

impl HslColor {
    /// Validates `s` and `l`, wraps `h` into `[0, 360)`.
    pub fn new(h: f64, s: f64, l: f64) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::InvalidColor(format!("hue {h} is not finite")));
        }
        for (name, v) in [("saturation", s), ("lightness", l)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidColor(format!("{name} {v} outside [0, 1]")));
            }
        }
        let mut h = h.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        if h >= 360.0 {
            h = 0.0;
        }
        Ok(Self { h, s, l })
    }
}

/// Gamma-encoded sRGB, channels in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrgbColor {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl SrgbColor {
    pub fn new(r: f64, g: f64, b: f64) -> Result<Self> {
        for (name, v) in [("red", r), ("green", g), ("blue", b)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidColor(format!("{name} {v} outside [0, 1]")));
            }
        }
        Ok(Self { r, g, b })
    }

    /// `#rrggbb`, channels rounded to 8 bits.
    pub fn to_hex(self) -> String {
        let q = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
        format!("#{:02x}{:02x}{:02x}", q(self.r), q(self.g), q(self.b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l_star: f64,
    pub a_star: f64,
    pub b_star: f64,
}

impl LabColor {
    pub const fn new(l_star: f64, a_star: f64, b_star: f64) -> Self {
        Self {
            l_star,
            a_star,
            b_star,
        }
    }

    pub fn from_hsl(c: HslColor) -> Self {
        srgb_to_lab(hsl_to_srgb(c))
    }

    pub fn scaled(self, k: f64) -> Self {
        Self::new(self.l_star * k, self.a_star * k, self.b_star * k)
    }

    /// Approximate display color; out-of-gamut values are clamped.
    pub fn to_srgb_clamped(self) -> SrgbColor {
        let fy = (self.l_star + 16.0) / 116.0;
        let fx = fy + self.a_star / 500.0;
        let fz = fy - self.b_star / 200.0;
        let [xn, yn, zn] = WHITE;
        let xyz = [xn * lab_f_inv(fx), yn * lab_f_inv(fy), zn * lab_f_inv(fz)];
        let mut rgb = [0.0; 3];
        for (i, row) in XYZ_TO_RGB.iter().enumerate() {
            let lin: f64 = row.iter().zip(xyz).map(|(m, v)| m * v).sum();
            rgb[i] = encode_srgb(lin.clamp(0.0, 1.0));
        }
        SrgbColor {
            r: rgb[0],
            g: rgb[1],
            b: rgb[2],
        }
    }
}

const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.240_454_2, -1.537_138_5, -0.498_531_4],
    [-0.969_266_0, 1.876_010_8, 0.041_556_0],
    [0.055_643_4, -0.204_025_9, 1.057_225_2],
];

const WHITE: [f64; 3] = [
    RGB_TO_XYZ[0][0] + RGB_TO_XYZ[0][1] + RGB_TO_XYZ[0][2],
    RGB_TO_XYZ[1][0] + RGB_TO_XYZ[1][1] + RGB_TO_XYZ[1][2],
    RGB_TO_XYZ[2][0] + RGB_TO_XYZ[2][1] + RGB_TO_XYZ[2][2],
];

const DELTA: f64 = 6.0 / 29.0;

fn decode_srgb(c: f64) -> f64 {
    if c <= 0.040_45 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn encode_srgb(c: f64) -> f64 {
    if c <= 0.003_130_8 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(t: f64) -> f64 {
    if t > DELTA {
        t * t * t
    } else {
        3.0 * DELTA * DELTA * (t - 4.0 / 29.0)
    }
}

pub fn hsl_to_srgb(c: HslColor) -> SrgbColor {
    let chroma = (1.0 - (2.0 * c.l - 1.0).abs()) * c.s;
    let sector = c.h / 60.0;
    let x = chroma * (1.0 - (sector.rem_euclid(2.0) - 1.0).abs());
    let (r, g, b) = match sector as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = c.l - chroma / 2.0;
    // float error can push a channel a hair outside [0, 1]
    let fix = |v: f64| (v + m).clamp(0.0, 1.0);
    SrgbColor {
        r: fix(r),
        g: fix(g),
        b: fix(b),
    }
}

pub fn srgb_to_lab(c: SrgbColor) -> LabColor {
    let lin = [decode_srgb(c.r), decode_srgb(c.g), decode_srgb(c.b)];
    let mut f = [0.0; 3];
    for (i, row) in RGB_TO_XYZ.iter().enumerate() {
        let xyz: f64 = row.iter().zip(lin).map(|(m, v)| m * v).sum();
        f[i] = lab_f(xyz / WHITE[i]);
    }
    LabColor {
        l_star: 116.0 * f[1] - 16.0,
        a_star: 500.0 * (f[0] - f[1]),
        b_star: 200.0 * (f[1] - f[2]),
    }
}

/// Euclidean distance in L*a*b*.
pub fn lab_distance(a: LabColor, b: LabColor) -> f64 {
    let dl = a.l_star - b.l_star;
    let da = a.a_star - b.a_star;
    let db = a.b_star - b.b_star;
    (dl * dl + da * da + db * db).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hsl_gray_and_primary() {
        let white = hsl_to_srgb(HslColor::new(0.0, 0.0, 1.0).unwrap());
        assert_eq!((white.r, white.g, white.b), (1.0, 1.0, 1.0));
        let red = hsl_to_srgb(HslColor::new(0.0, 1.0, 0.5).unwrap());
        assert_eq!((red.r, red.g, red.b), (1.0, 0.0, 0.0));
    }

    #[test]
    fn hsl_reference_value() {
        // (210°, 50%, 40%) computed with Python's colorsys.hls_to_rgb(210/360, 0.4, 0.5)
        let c = hsl_to_srgb(HslColor::new(210.0, 0.5, 0.4).unwrap());
        assert!(close(c.r, 0.2, 1e-12), "{c:?}");
        assert!(close(c.g, 0.4, 1e-12), "{c:?}");
        assert!(close(c.b, 0.6, 1e-12), "{c:?}");
    }

    #[test]
    fn hue_wraps() {
        let c = HslColor::new(-30.0, 0.5, 0.5).unwrap();
        assert!(close(c.h, 330.0, 1e-12));
        let c = HslColor::new(720.0, 0.5, 0.5).unwrap();
        assert_eq!(c.h, 0.0);
        assert!(HslColor::new(0.0, 1.2, 0.5).is_err());
        assert!(HslColor::new(f64::NAN, 0.5, 0.5).is_err());
    }

    #[test]
    fn lab_anchor_points() {
        let w = srgb_to_lab(SrgbColor::new(1.0, 1.0, 1.0).unwrap());
        assert!(
            close(w.l_star, 100.0, 1e-4)
                && close(w.a_star, 0.0, 1e-4)
                && close(w.b_star, 0.0, 1e-4)
        );
        let k = srgb_to_lab(SrgbColor::new(0.0, 0.0, 0.0).unwrap());
        assert!(
            close(k.l_star, 0.0, 1e-4) && close(k.a_star, 0.0, 1e-4) && close(k.b_star, 0.0, 1e-4)
        );
        // skimage.color.rgb2lab([[[1, 0, 0]]]) -> 53.2406, 80.0923, 67.2028
        let r = srgb_to_lab(SrgbColor::new(1.0, 0.0, 0.0).unwrap());
        assert!(close(r.l_star, 53.2406, 0.01), "{r:?}");
        assert!(close(r.a_star, 80.0923, 0.01), "{r:?}");
        assert!(close(r.b_star, 67.2028, 0.01), "{r:?}");
    }

    #[test]
    fn distance_basics() {
        let o = LabColor::new(0.0, 0.0, 0.0);
        assert_eq!(lab_distance(o, o), 0.0);
        assert_eq!(lab_distance(o, LabColor::new(3.0, 4.0, 0.0)), 5.0);
    }

    #[test]
    fn lab_inverse_round_trips_in_gamut() {
        let c = SrgbColor::new(0.3, 0.6, 0.2).unwrap();
        let back = srgb_to_lab(c).to_srgb_clamped();
        assert!(close(back.r, 0.3, 1e-5) && close(back.g, 0.6, 1e-5) && close(back.b, 0.2, 1e-5));
        assert_eq!(c.to_hex(), "#4d9933");
    }

    fn lab() -> impl Strategy<Value = LabColor> {
        (0.0..100.0f64, -128.0..128.0f64, -128.0..128.0f64)
            .prop_map(|(l, a, b)| LabColor::new(l, a, b))
    }

    proptest! {
        #[test]
        fn distance_symmetric(a in lab(), b in lab()) {
            prop_assert_eq!(lab_distance(a, b), lab_distance(b, a));
        }

        #[test]
        fn triangle_inequality(a in lab(), b in lab(), c in lab()) {
            prop_assert!(lab_distance(a, c) <= lab_distance(a, b) + lab_distance(b, c) + 1e-9);
        }

        #[test]
        fn gray_has_equal_channels(h in 0.0..360.0f64, l in 0.0..=1.0f64) {
            let c = hsl_to_srgb(HslColor::new(h, 0.0, l).unwrap());
            prop_assert!(c.r == c.g && c.g == c.b);
        }
    }
}
