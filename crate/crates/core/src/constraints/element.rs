use crate::kernel::{Activation, PropResult, Propagator, Solver, Store, VarId, Watch};

/// `result = table[index]` with a 1-based index, domain consistent.
pub struct Element {
    table: Vec<i64>,
    index: VarId,
    result: VarId,
}

impl Element {
    pub fn new(result: VarId, table: Vec<i64>, index: VarId) -> Self {
        Element { table, index, result }
    }
}

impl Propagator for Element {
    fn name(&self) -> &'static str {
        "element"
    }

    fn watches(&self) -> Vec<(VarId, Watch)> {
        vec![(self.index, Watch::Domain), (self.result, Watch::Domain)]
    }

    fn propagate(&mut self, store: &mut Store, _: Activation<'_>) -> PropResult {
        let len = self.table.len() as i64;
        store.set_min(self.index, 1)?;
        store.set_max(self.index, len)?;
        let table = &self.table;
        let result = store.dom(self.result).clone();
        store.retain(self.index, |i| result.contains(table[(i - 1) as usize]))?;
        let reachable: Vec<i64> = store.dom(self.index).iter().map(|i| table[(i - 1) as usize]).collect();
        store.retain(self.result, |v| reachable.contains(&v))
    }
}

impl Solver {
    pub fn post_element(&mut self, result: VarId, table: &[i64], index: VarId) {
        self.post(Element::new(result, table.to_vec(), index));
    }
}
