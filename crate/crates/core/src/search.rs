//! Candidate operator lists for certificate searches.

use std::collections::HashSet;

use num_traits::One;

use crate::error::Result;
use crate::linop::{grid_operators, sample_positive_operators, LinOp, PosOp};
use crate::num::{q, Q};
use crate::problem::ProblemInstance;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Entries of `T` range over `[−t_bound, t_bound]` in steps of `t_step`.
    pub t_bound: Q,
    pub t_step: Q,
    /// Same for `L′` and `L″`.
    pub l_bound: Q,
    pub l_step: Q,
    pub use_hints: bool,
    pub use_grid: bool,
    /// Upper bound on the number of candidates one search may examine.
    pub max_candidates: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            t_bound: q(2),
            t_step: Q::one(),
            l_bound: q(1),
            l_step: Q::one(),
            use_hints: true,
            use_grid: true,
            max_candidates: 200_000,
        }
    }
}

impl SearchConfig {
    pub fn hints_only() -> Self {
        SearchConfig {
            use_grid: false,
            ..SearchConfig::default()
        }
    }
}

/// Ordered candidate lists. A search walks `ts × lps × lpps` lexicographically
/// with `T` outermost.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub ts: Vec<PosOp>,
    pub lps: Vec<LinOp>,
    pub lpps: Vec<LinOp>,
    pub max_candidates: usize,
}

struct Ordered<T> {
    seen: HashSet<LinOp>,
    items: Vec<T>,
}

impl<T> Ordered<T> {
    fn new() -> Self {
        Ordered {
            seen: HashSet::new(),
            items: Vec::new(),
        }
    }

    fn push(&mut self, key: &LinOp, item: T) {
        if self.seen.insert(key.clone()) {
            self.items.push(item);
        }
    }
}

impl SearchSpace {
    pub fn new(ts: Vec<PosOp>, lps: Vec<LinOp>, lpps: Vec<LinOp>) -> SearchSpace {
        SearchSpace {
            ts,
            lps,
            lpps,
            max_candidates: usize::MAX,
        }
    }

    /// Hints first, then the zero operator, then the grid.
    pub fn from_config(p: &ProblemInstance, cfg: &SearchConfig) -> Result<SearchSpace> {
        let (k, s) = (p.k(), p.s());
        let mut ts = Ordered::new();
        if cfg.use_hints {
            for t in &p.hints.t {
                ts.push(t, PosOp::new(t.clone(), s, k)?);
            }
        }
        let zero = PosOp::zero(s, k);
        ts.push(&zero.op().clone(), zero);
        if cfg.use_grid {
            for t in sample_positive_operators(s, k, &cfg.t_bound, &cfg.t_step)? {
                ts.push(&t.op().clone(), t);
            }
        }
        let ops = |hints: &[LinOp]| -> Result<Vec<LinOp>> {
            let mut out = Ordered::new();
            if cfg.use_hints {
                for h in hints {
                    out.push(h, h.clone());
                }
            }
            let zero = p.zero_perturbation();
            out.push(&zero, zero.clone());
            if cfg.use_grid {
                for l in grid_operators(p.m(), p.n(), &cfg.l_bound, &cfg.l_step)? {
                    out.push(&l, l.clone());
                }
            }
            Ok(out.items)
        };
        Ok(SearchSpace {
            ts: ts.items,
            lps: ops(&p.hints.lp)?,
            lpps: ops(&p.hints.lpp)?,
            max_candidates: cfg.max_candidates,
        })
    }

    /// Number of candidates for certificates of the given index, before the cap.
    pub fn size(&self, index: u8) -> usize {
        match index {
            1 => self.ts.len(),
            2 => self.ts.len().saturating_mul(self.lps.len()),
            _ => self
                .ts
                .len()
                .saturating_mul(self.lps.len())
                .saturating_mul(self.lpps.len()),
        }
    }

    pub fn budget(&self, index: u8) -> usize {
        self.size(index).min(self.max_candidates)
    }

    /// Candidate number `i` as (T, L′, L″) indices.
    pub fn decode(&self, index: u8, i: usize) -> (usize, usize, usize) {
        match index {
            1 => (i, 0, 0),
            2 => (i / self.lps.len(), i % self.lps.len(), 0),
            _ => {
                let inner = self.lps.len() * self.lpps.len();
                (i / inner, (i % inner) / self.lpps.len(), i % self.lpps.len())
            }
        }
    }
}
