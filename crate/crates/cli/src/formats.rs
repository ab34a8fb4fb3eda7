//! Deterministic artifact serialization: CSV with 9-significant-digit
//! decimals, JSON region bundles with vertex arrays, complex numbers as
//! `[re, im]` pairs.

use irs_regions_core::channel::ChannelRealization;
use irs_regions_core::region::RatePolygon;
use num_complex::Complex64;
use serde::Serialize;

/// Formats a float with 9 significant digits, locale-independent.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Minimal CSV emitter: header row plus records, `\n` line endings.
pub struct CsvTable {
    lines: Vec<String>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            lines: vec![header.join(",")],
        }
    }

    pub fn push(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn into_string(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
pub struct ChannelOut {
    pub direct: [[f64; 2]; 2],
    pub dist_user_to_irs: [Vec<[f64; 2]>; 2],
    pub dist_irs_to_ap: [Vec<[f64; 2]>; 2],
    pub cent_user_to_irs: [Vec<[f64; 2]>; 2],
    pub cent_irs_to_ap: Vec<[f64; 2]>,
    pub m: usize,
    pub m1: usize,
    pub m2: usize,
}

impl ChannelOut {
    pub fn from_realization(ch: &ChannelRealization) -> Self {
        let vec_pairs = |v: &[Complex64]| v.iter().copied().map(complex_pair).collect();
        Self {
            direct: [complex_pair(ch.direct[0]), complex_pair(ch.direct[1])],
            dist_user_to_irs: [
                vec_pairs(&ch.dist_user_to_irs[0]),
                vec_pairs(&ch.dist_user_to_irs[1]),
            ],
            dist_irs_to_ap: [
                vec_pairs(&ch.dist_irs_to_ap[0]),
                vec_pairs(&ch.dist_irs_to_ap[1]),
            ],
            cent_user_to_irs: [
                vec_pairs(&ch.cent_user_to_irs[0]),
                vec_pairs(&ch.cent_user_to_irs[1]),
            ],
            cent_irs_to_ap: vec_pairs(&ch.cent_irs_to_ap),
            m: ch.sizes.m,
            m1: ch.sizes.m1,
            m2: ch.sizes.m2,
        }
    }
}

#[derive(Serialize)]
pub struct RegionOut {
    pub name: String,
    /// Counter-clockwise hull vertices as `[r1, r2]` in bits/s/Hz.
    pub vertices: Vec<[f64; 2]>,
    pub max_common_rate: f64,
    pub max_sum_rate: f64,
}

impl RegionOut {
    pub fn from_polygon(name: &str, region: &RatePolygon) -> Self {
        let vertices: Vec<[f64; 2]> = region
            .vertices()
            .iter()
            .map(|p| [p.r1, p.r2])
            .collect();
        let max_sum_rate = region
            .vertices()
            .iter()
            .map(|p| p.r1 + p.r2)
            .fold(0.0, f64::max);
        Self {
            name: name.to_owned(),
            vertices,
            max_common_rate: region.max_common_rate(),
            max_sum_rate,
        }
    }
}

#[derive(Serialize)]
pub struct SeedBundleOut {
    pub schema_version: u32,
    pub experiment: String,
    pub seed: u64,
    pub channel: ChannelOut,
    pub regions: Vec<RegionOut>,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable artifact");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use irs_regions_core::region::{convex_hull, RatePair};

    #[test]
    fn sig9_has_nine_significant_digits() {
        assert_eq!(sig9(1.0), "1.00000000e0");
        assert_eq!(sig9(123.456789123), "1.23456789e2");
        assert_eq!(sig9(-0.000123456789123), "-1.23456789e-4");
    }

    #[test]
    fn csv_has_header_and_trailing_newline() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(&[sig9(1.0), sig9(2.0)]);
        assert_eq!(t.into_string(), "a,b\n1.00000000e0,2.00000000e0\n");
    }

    #[test]
    fn region_out_summaries() {
        let region = convex_hull(&[RatePair::new(2.0, 0.0), RatePair::new(0.0, 2.0)]).unwrap();
        let out = RegionOut::from_polygon("triangle", &region);
        assert_eq!(out.max_sum_rate, 2.0);
        assert!((out.max_common_rate - 1.0).abs() < 1e-12);
        assert!(out.vertices.contains(&[0.0, 0.0]));
    }
}
