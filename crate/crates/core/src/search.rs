//! Depth-first enumeration of integer points `0 <= x <= upper` with
//! `A x = 0`, excluding `0` and `upper` itself.
//!
//! Variables are fixed in a caller-given order, values tried from the upper
//! bound down. After each assignment every row touching the variable is
//! checked for whether zero is still reachable by the unassigned variables.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<i64>),
    Exhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// One sparse row: `(column, coefficient)` pairs.
pub type SparseRow = Vec<(usize, i64)>;

pub fn sparse_rows(dense: &[Vec<i64>]) -> Vec<SparseRow> {
    dense
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect()
        })
        .collect()
}

struct State<'a> {
    upper: &'a [i64],
    accept: &'a dyn Fn(&[i64]) -> bool,
    order: Vec<usize>,
    /// For each variable, `(row, coefficient)` pairs.
    touching: Vec<Vec<(usize, i64)>>,
    partial: Vec<i64>,
    rest_min: Vec<i64>,
    rest_max: Vec<i64>,
    value: Vec<i64>,
    nodes: u64,
    budget: u64,
}

impl State<'_> {
    fn feasible(&self, var: usize) -> bool {
        self.touching[var].iter().all(|&(r, _)| {
            self.partial[r] + self.rest_min[r] <= 0 && self.partial[r] + self.rest_max[r] >= 0
        })
    }

    fn dfs(&mut self, depth: usize) -> Option<SearchOutcome> {
        if depth == self.order.len() {
            let proper = self.value.iter().any(|&v| v != 0)
                && self.value.iter().zip(self.upper).any(|(v, u)| v != u)
                && (self.accept)(&self.value);
            return proper.then(|| SearchOutcome::Found(self.value.clone()));
        }
        let var = self.order[depth];
        let u = self.upper[var];
        for &(r, c) in &self.touching[var] {
            let span = c * u;
            self.rest_min[r] -= span.min(0);
            self.rest_max[r] -= span.max(0);
        }
        let mut result = None;
        for val in (0..=u).rev() {
            if self.nodes >= self.budget {
                result = Some(SearchOutcome::BudgetExceeded);
                break;
            }
            self.nodes += 1;
            self.value[var] = val;
            for &(r, c) in &self.touching[var] {
                self.partial[r] += c * val;
            }
            if self.feasible(var) {
                result = self.dfs(depth + 1);
            }
            for &(r, c) in &self.touching[var] {
                self.partial[r] -= c * val;
            }
            if result.is_some() {
                break;
            }
        }
        self.value[var] = 0;
        for &(r, c) in &self.touching[var] {
            let span = c * u;
            self.rest_min[r] += span.min(0);
            self.rest_max[r] += span.max(0);
        }
        result
    }
}

/// Searches for `x` with `0 <= x <= upper`, `x != 0`, `x != upper` and
/// every row vanishing. `order` lists the variables to branch on first;
/// variables missing from it follow in index order.
pub fn find_proper_solution(
    rows: &[SparseRow],
    upper: &[i64],
    order: &[usize],
    budget: u64,
) -> SearchResult {
    find_proper_solution_with(rows, upper, order, budget, &|_| true)
}

/// As [`find_proper_solution`], skipping complete candidates `accept`
/// rejects.
pub fn find_proper_solution_with(
    rows: &[SparseRow],
    upper: &[i64],
    order: &[usize],
    budget: u64,
    accept: &dyn Fn(&[i64]) -> bool,
) -> SearchResult {
    let n = upper.len();
    let mut seen = vec![false; n];
    let mut full_order = Vec::with_capacity(n);
    for v in order.iter().copied().chain(0..n) {
        if v < n && !seen[v] {
            seen[v] = true;
            if upper[v] > 0 {
                full_order.push(v);
            }
        }
    }
    let mut touching = vec![Vec::new(); n];
    let mut rest_min = vec![0; rows.len()];
    let mut rest_max = vec![0; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for &(v, c) in row {
            if upper[v] > 0 {
                touching[v].push((r, c));
                rest_min[r] += (c * upper[v]).min(0);
                rest_max[r] += (c * upper[v]).max(0);
            }
        }
    }
    let mut state = State {
        upper,
        accept,
        order: full_order,
        touching,
        partial: vec![0; rows.len()],
        rest_min,
        rest_max,
        value: vec![0; n],
        nodes: 0,
        budget,
    };
    let outcome = state.dfs(0).unwrap_or(SearchOutcome::Exhausted);
    SearchResult {
        outcome,
        nodes: state.nodes,
    }
}
