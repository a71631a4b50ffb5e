use crate::flow::{build_graph, BinGraph, BinSpec, FlowBounds};
use crate::kernel::{Activation, Inconsistency, IntDomain, PropResult, Propagator, Store, StoredBool, VarId, Watch};

/// Shared state of both flow-based propagators.
struct Core {
    xs: Vec<VarId>,
    cs: Vec<VarId>,
    bins: BinSpec,
    hidden: bool,
}

impl Core {
    fn watches(&self) -> Vec<(VarId, Watch)> {
        let xs = self.xs.iter().map(|x| (*x, Watch::Domain));
        xs.chain(self.cs.iter().map(|c| (*c, Watch::Bounds))).collect()
    }

    /// Bin count including the hidden one.
    fn slots(&self) -> usize {
        self.bins.num_bins() + usize::from(self.hidden)
    }

    fn restrict_to_span(&self, store: &mut Store) -> PropResult {
        if !self.hidden {
            let (lo, hi) = self.bins.span();
            for &x in &self.xs {
                store.set_min(x, lo)?;
                store.set_max(x, hi)?;
            }
        }
        Ok(())
    }

    fn bounds(&self, store: &Store) -> Result<(BinGraph, FlowBounds), Inconsistency> {
        let domains: Vec<IntDomain> = self.xs.iter().map(|x| store.dom(*x).clone()).collect();
        let counts: Vec<(i64, i64)> = self.cs.iter().map(|c| (store.min(*c), store.max(*c))).collect();
        let graph = build_graph(&domains, &self.bins, &counts, self.hidden).map_err(|_| Inconsistency)?;
        let bounds = graph.bounds().ok_or(Inconsistency)?;
        Ok((graph, bounds))
    }

    /// First loop: every count to its exact `[min, max]`.
    fn update_bins(&self, store: &mut Store, bounds: &FlowBounds) -> PropResult {
        for (&c, &(lo, hi)) in self.cs.iter().zip(&bounds.counts) {
            store.set_min(c, lo)?;
            store.set_max(c, hi)?;
        }
        Ok(())
    }

    fn intersects(&self, store: &Store, x: VarId, j: usize) -> bool {
        let dom = store.dom(x);
        if j < self.bins.num_bins() {
            let (lo, hi) = self.bins.interval(j);
            dom.intersects(lo, hi)
        } else {
            let (lo, hi) = self.bins.span();
            dom.min() < lo || dom.max() > hi
        }
    }

    /// `Dom(x) \ bin j`; the hidden bin is everything outside the span.
    fn remove_bin(&self, store: &mut Store, x: VarId, j: usize) -> PropResult {
        if j < self.bins.num_bins() {
            let (lo, hi) = self.bins.interval(j);
            store.remove_range(x, lo, hi)
        } else {
            let (lo, hi) = self.bins.span();
            if store.min(x) < lo {
                store.remove_range(x, store.min(x), lo - 1)?;
            }
            if store.max(x) > hi {
                store.remove_range(x, hi + 1, store.max(x))?;
            }
            Ok(())
        }
    }

    /// `Dom(x) ∩ bin j`.
    fn keep_bin(&self, store: &mut Store, x: VarId, j: usize) -> PropResult {
        if j < self.bins.num_bins() {
            let (lo, hi) = self.bins.interval(j);
            store.set_min(x, lo)?;
            store.set_max(x, hi)
        } else {
            let (lo, hi) = self.bins.span();
            store.remove_range(x, lo, hi)
        }
    }
}

/// Flow-based bin counting filter achieving generalized arc consistency.
///
/// Each run rebuilds the network from current domains, tightens every count to
/// its exact flow bounds, then removes the bin interval of every arc whose
/// flow is forced to zero and keeps only the bin of every arc forced to one.
pub struct BinCountsGac {
    core: Core,
}

impl BinCountsGac {
    pub fn new(xs: Vec<VarId>, cs: Vec<VarId>, bins: BinSpec, hidden: bool) -> Self {
        assert_eq!(cs.len(), bins.num_bins(), "one count variable per bin");
        BinCountsGac { core: Core { xs, cs, bins, hidden } }
    }
}

impl Propagator for BinCountsGac {
    fn name(&self) -> &'static str {
        "bin_counts_gac"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        self.core.watches()
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        let core = &self.core;
        core.restrict_to_span(store)?;
        let (graph, bounds) = core.bounds(store)?;
        core.update_bins(store, &bounds)?;
        for (arc, &(lb, ub)) in graph.arcs().iter().zip(&bounds.arcs) {
            let x = core.xs[arc.var];
            if lb == 1 {
                core.keep_bin(store, x, arc.bin)?;
            } else if ub == 0 {
                core.remove_bin(store, x, arc.bin)?;
            }
        }
        Ok(())
    }
}

/// Incremental variant: stored booleans `g[i][j]` record whether `Dom(x_i)`
/// may still meet bin `j`, and a run triggered by value variables only
/// revisits arcs `(i, j)` where some trigger and `x_i` both still meet bin `j`.
/// Count bounds are recomputed on every run.
pub struct BinCountsIncremental {
    core: Core,
    g: Vec<Vec<StoredBool>>,
}

impl BinCountsIncremental {
    pub fn new(xs: Vec<VarId>, cs: Vec<VarId>, bins: BinSpec, hidden: bool) -> Self {
        assert_eq!(cs.len(), bins.num_bins(), "one count variable per bin");
        BinCountsIncremental { core: Core { xs, cs, bins, hidden }, g: Vec::new() }
    }
}

impl Propagator for BinCountsIncremental {
    fn name(&self) -> &'static str {
        "bin_counts_gac_incremental"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        self.core.watches()
    }

    fn init(&mut self, store: &mut Store) {
        let slots = self.core.slots();
        self.g = self.core.xs.iter().map(|_| (0..slots).map(|_| store.new_bool(true)).collect()).collect();
    }

    fn propagate(&mut self, store: &mut Store, activation: Activation<'_>) -> PropResult {
        let core = &self.core;
        let n = core.xs.len();
        // Snapshot g for every value-variable trigger; None means no skipping.
        let snapshots: Option<Vec<Vec<bool>>> = match activation {
            Activation::Initial => None,
            Activation::Events(triggers) if triggers.iter().all(|k| *k < n) => {
                Some(triggers.iter().map(|&v| self.g[v].iter().map(|b| store.get_bool(*b)).collect()).collect())
            }
            Activation::Events(_) => None,
        };
        core.restrict_to_span(store)?;
        let (graph, bounds) = core.bounds(store)?;
        core.update_bins(store, &bounds)?;
        for (arc, &(lb, ub)) in graph.arcs().iter().zip(&bounds.arcs) {
            let (i, j) = (arc.var, arc.bin);
            if let Some(snaps) = &snapshots {
                let g_ij = store.get_bool(self.g[i][j]);
                if !snaps.iter().any(|hat| hat[j] && g_ij) {
                    continue;
                }
            }
            let x = core.xs[i];
            if lb == 1 {
                core.keep_bin(store, x, j)?;
                for l in (0..core.slots()).filter(|l| *l != j) {
                    store.set_bool(self.g[i][l], false);
                }
            } else if ub == 0 {
                core.remove_bin(store, x, j)?;
                store.set_bool(self.g[i][j], false);
            }
        }
        if matches!(activation, Activation::Initial) {
            for (i, &x) in core.xs.iter().enumerate() {
                for j in 0..core.slots() {
                    let meets = core.intersects(store, x, j);
                    store.set_bool(self.g[i][j], meets);
                }
            }
        }
        Ok(())
    }
}
