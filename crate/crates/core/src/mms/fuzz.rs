//! Seeded, order-stable random checking of the ledger inequalities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::ResolutionGraph;
use super::ledger::{
    is_compatible, ledger_b8_check, ledger_validate, prop21_check, random_graph, random_graph_with_small,
    random_monotone_ledger,
};
use crate::exactmath::rat;

pub const DEFAULT_SEED: u64 = 0x5eed_2005;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub graphs: usize,
    pub ledgers: usize,
    pub recurrence_failures: usize,
    pub compatibility_failures: usize,
    pub invalid_ledgers: usize,
    pub b8_failures: usize,
    pub b2_failures: usize,
    pub b3_failures: usize,
    /// First few failures, in draw order.
    pub failures: Vec<String>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.recurrence_failures
            + self.compatibility_failures
            + self.invalid_ledgers
            + self.b8_failures
            + self.b2_failures
            + self.b3_failures
            == 0
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `p_i = Σ_{j→i} p_j` for every `i < K`, and `p_K = 1`.
pub fn path_recurrence_holds(g: &ResolutionGraph) -> bool {
    let Ok(p) = g.path_counts() else { return false };
    let k = g.len();
    p[k - 1] == 1 && (1..k).all(|i| p[i - 1] == g.arrows_into(i).iter().map(|&j| p[j - 1]).sum::<u64>())
}

#[derive(Default)]
struct One {
    recurrence: bool,
    compatibility: bool,
    invalid: bool,
    b8: bool,
    b2: bool,
    b3: bool,
    notes: Vec<String>,
}

fn check_graph(idx: u64, seed: u64, max_k: usize) -> One {
    let mut rng = rng_for(seed, 2 * idx);
    let g = random_graph(&mut rng, max_k);
    let mut out = One::default();
    if !path_recurrence_holds(&g) {
        out.recurrence = true;
        out.notes.push(format!("graph #{idx}: path-count recurrence fails"));
    }
    let p: Vec<_> = g.path_counts().unwrap_or_default().iter().map(|&x| rat(x as i64)).collect();
    if !is_compatible(&g, &p) {
        out.compatibility = true;
        out.notes.push(format!("graph #{idx}: path counts not compatible"));
    }
    out
}

fn check_ledger(idx: u64, seed: u64, max_k: usize) -> One {
    let mut rng = rng_for(seed, 2 * idx + 1);
    let led = loop {
        let g = random_graph_with_small(&mut rng, max_k);
        if let Some(l) = random_monotone_ledger(&mut rng, &g) {
            break l;
        }
    };
    let mut out = One::default();
    let check = ledger_validate(&led);
    if !check.valid {
        out.invalid = true;
        out.notes.push(format!("ledger #{idx}: invalid ({})", check.diagnostics.join("; ")));
        return out;
    }
    let p = led.graph.path_counts().expect("small graph");
    let a: Vec<_> = p.iter().map(|&x| rat(x as i64)).collect();
    match ledger_b8_check(&led, &a) {
        Ok(c) if c.holds => {}
        Ok(c) => {
            out.b8 = true;
            out.notes.push(format!("ledger #{idx}: (b8) {} < {}", c.lhs, c.rhs));
        }
        Err(e) => {
            out.b8 = true;
            out.notes.push(format!("ledger #{idx}: {e}"));
        }
    }
    match prop21_check(&led, &p) {
        Ok(c) => {
            if !c.b2 {
                out.b2 = true;
                out.notes.push(format!("ledger #{idx}: (b2) {} > {}", c.lhs, c.middle));
            }
            if !c.b3 {
                out.b3 = true;
                out.notes.push(format!("ledger #{idx}: (b3) {} > {}", c.lhs, c.upper));
            }
        }
        Err(e) => {
            out.b2 = true;
            out.notes.push(format!("ledger #{idx}: {e}"));
        }
    }
    out
}

/// `graphs` random DAGs for the path-count checks and `ledgers` random valid
/// monotone ledgers for (b8), (b2), (b3). Stream `i` of the seed drives draw
/// `i`, so results do not depend on thread scheduling.
pub fn ledger_fuzz(seed: u64, graphs: usize, ledgers: usize, max_k: usize) -> FuzzReport {
    let max_k = max_k.max(1);
    let g: Vec<One> = (0..graphs as u64).into_par_iter().map(|i| check_graph(i, seed, max_k)).collect();
    let l: Vec<One> = (0..ledgers as u64).into_par_iter().map(|i| check_ledger(i, seed, max_k)).collect();
    let count = |v: &[One], f: fn(&One) -> bool| v.iter().filter(|o| f(o)).count();
    FuzzReport {
        seed,
        graphs,
        ledgers,
        recurrence_failures: count(&g, |o| o.recurrence),
        compatibility_failures: count(&g, |o| o.compatibility),
        invalid_ledgers: count(&l, |o| o.invalid),
        b8_failures: count(&l, |o| o.b8),
        b2_failures: count(&l, |o| o.b2),
        b3_failures: count(&l, |o| o.b3),
        failures: g.iter().chain(&l).flat_map(|o| o.notes.iter().cloned()).take(10).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzz_is_clean_and_reproducible() {
        let a = ledger_fuzz(7, 200, 500, 7);
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a, ledger_fuzz(7, 200, 500, 7));
    }

    #[test]
    fn recurrence_on_fixed_graph() {
        let g = ResolutionGraph::new(
            ResolutionGraph::chain(&[4, 4, 2], 1).unwrap().vertices().to_vec(),
            &[(3, 1)],
        )
        .unwrap();
        assert_eq!(g.path_counts().unwrap(), vec![2, 1, 1]);
        assert!(path_recurrence_holds(&g));
    }
}
