//! Asymptotic 5% critical values for the structural-change test battery
//! with a single mean regressor (q = 1), transcribed from the published
//! Bai–Perron tables (Econometrica 1998, Table 1; 5% trimming). For
//! larger trimming fractions the supF maximization runs over a subset of
//! the admissible breaks, so these values are conservative.

/// 5% critical values, q = 1.
#[derive(Debug, Clone)]
pub struct CriticalValues {
    /// supF(k) critical values for k = 1..=5.
    pub sup_f: [f64; 5],
    pub ud_max: f64,
    pub wd_max: f64,
    /// supF(l+1 | l) critical values for l = 1..=4.
    pub seq: [f64; 4],
}

impl CriticalValues {
    pub fn at_5_percent() -> Self {
        Self {
            sup_f: [8.58, 7.22, 5.96, 4.99, 4.91],
            ud_max: 8.88,
            wd_max: 9.91,
            seq: [10.13, 11.14, 11.83, 12.25],
        }
    }

    /// Critical value for supF(k), 1-based k.
    pub fn sup_f(&self, k: usize) -> f64 {
        self.sup_f[(k - 1).min(self.sup_f.len() - 1)]
    }

    /// WDmax weight a_k = c(1) / c(k), so a_1 = 1.
    pub fn wd_weight(&self, k: usize) -> f64 {
        self.sup_f[0] / self.sup_f(k)
    }

    /// Critical value for supF(l+1 | l). l = 0 falls back to supF(1).
    pub fn seq(&self, l: usize) -> f64 {
        if l == 0 {
            self.sup_f[0]
        } else {
            self.seq[(l - 1).min(self.seq.len() - 1)]
        }
    }
}
