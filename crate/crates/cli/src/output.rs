use std::cmp::Ordering;

use serde_json::{json, Value};

pub const BINS: usize = 10;

pub fn csv_line(fields: &[&str]) -> String {
    let mut s = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",");
    s.push('\n');
    s
}

/// Words are space separated so they survive as a single CSV field; the
/// identity is `e`.
pub fn word_field(w: &[usize]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `100 * num / den` in hundredths of a percent, rounded half up.
pub fn pct_hundredths(num: usize, den: usize) -> u64 {
    assert!(den > 0 && num <= den);
    let (num, den) = (num as u64, den as u64);
    (20_000 * num + den) / (2 * den)
}

pub fn render_pct(h: u64) -> String {
    format!("{}.{:02}", h / 100, h % 100)
}

/// Percentages binned as [0,10), [10,20), ..., [90,100]. Binning and the
/// quartile use the exact fractions, not the rounded percentages.
#[derive(Clone, Debug)]
pub struct Histogram {
    counts: [usize; BINS],
    fractions: Vec<(usize, usize)>,
}

fn cmp_fraction(a: &(usize, usize), b: &(usize, usize)) -> Ordering {
    (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128))
}

impl Histogram {
    pub fn from_counts(it: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut counts = [0; BINS];
        let mut fractions: Vec<(usize, usize)> = it.into_iter().collect();
        for &(num, den) in &fractions {
            counts[(BINS * num / den).min(BINS - 1)] += 1;
        }
        fractions.sort_by(cmp_fraction);
        Histogram { counts, fractions }
    }

    pub fn counts(&self) -> &[usize; BINS] {
        &self.counts
    }

    pub fn label(bin: usize) -> String {
        let lo = bin * 100 / BINS;
        let hi = (bin + 1) * 100 / BINS;
        if bin + 1 == BINS {
            format!("[{lo},{hi}]")
        } else {
            format!("[{lo},{hi})")
        }
    }

    /// Highest-count bin; ties go to the higher bin.
    pub fn mode(&self) -> usize {
        (0..BINS)
            .rev()
            .max_by_key(|&b| (self.counts[b], b))
            .unwrap()
    }

    pub fn mode_label(&self) -> String {
        Self::label(self.mode())
    }

    pub fn mode_is_top(&self) -> bool {
        self.mode() == BINS - 1
    }

    /// Nearest-rank third quartile: the value at rank ceil(0.75 N).
    pub fn q3(&self) -> (usize, usize) {
        let n = self.fractions.len();
        assert!(n > 0);
        let rank = (3 * n).div_ceil(4);
        self.fractions[rank - 1]
    }

    pub fn q3_hundredths(&self) -> u64 {
        let (num, den) = self.q3();
        pct_hundredths(num, den)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..BINS)
                .map(|b| json!({"bin": Self::label(b), "count": self.counts[b]}))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pct_rounding() {
        assert_eq!(render_pct(pct_hundredths(1, 3)), "33.33");
        assert_eq!(render_pct(pct_hundredths(2, 3)), "66.67");
        assert_eq!(render_pct(pct_hundredths(1, 8)), "12.50");
        assert_eq!(render_pct(pct_hundredths(5, 5)), "100.00");
        assert_eq!(render_pct(pct_hundredths(0, 7)), "0.00");
    }

    #[test]
    fn histogram_bins_and_quartile() {
        let h = Histogram::from_counts([(1, 1), (9, 10), (89, 100), (0, 4), (1, 1)]);
        assert_eq!(h.counts()[9], 3);
        assert_eq!(h.counts()[8], 1);
        assert_eq!(h.counts()[0], 1);
        assert!(h.mode_is_top());
        // sorted: 0, .89, .9, 1, 1 ; rank ceil(3.75) = 4
        assert_eq!(h.q3(), (1, 1));
        assert_eq!(Histogram::label(0), "[0,10)");
        assert_eq!(Histogram::label(9), "[90,100]");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_line(&["a", "b,c", "d\"e"]), "a,\"b,c\",\"d\"\"e\"\n");
    }
}
