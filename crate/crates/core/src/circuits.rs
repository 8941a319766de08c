//! Boolean circuits over a [`Dag`], the cyclic shift, advice circuits and an
//! exhaustive search over depth-1 advice circuits for the shift.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dag::{topological_order, Dag};
use crate::error::{Error, Result};
use crate::extender::{binomial, unrank_combination};
use crate::fraction::Fraction;

/// A truth table over the in-neighbours of a vertex, sorted ascending; bit
/// `i` of the row index is the value of the `i`-th in-neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    table: Vec<bool>,
}

impl Gate {
    pub fn new(table: Vec<bool>) -> Result<Self> {
        if !table.len().is_power_of_two() {
            return Err(Error::InvalidCircuit(format!("table length {} is not a power of two", table.len())));
        }
        Ok(Gate { table })
    }

    pub fn constant(value: bool) -> Self {
        Gate { table: vec![value] }
    }

    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Self {
        Gate { table: (0..1usize << arity).map(f).collect() }
    }

    pub fn arity(&self) -> usize {
        self.table.len().trailing_zeros() as usize
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn apply(&self, row: usize) -> bool {
        self.table[row]
    }

    /// The table as a hexadecimal integer, row 0 in the lowest bit.
    pub fn to_hex(&self) -> String {
        let digits = self.table.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|&b| self.table.get(4 * d + b).copied().unwrap_or(false))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(nibble, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(arity: usize, hex: &str) -> Result<Self> {
        let rows = 1usize << arity;
        let nibbles: Vec<u32> = hex
            .chars()
            .rev()
            .map(|c| c.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit {c:?} in {hex:?}"))))
            .collect::<Result<_>>()?;
        if nibbles.len() != rows.div_ceil(4) {
            return Err(Error::Parse(format!("table {hex:?} does not have arity {arity}")));
        }
        let bit = |i: usize| nibbles[i / 4] >> (i % 4) & 1 == 1;
        if (rows..4 * nibbles.len()).any(bit) {
            return Err(Error::Parse(format!("table {hex:?} has bits beyond row {rows}")));
        }
        Ok(Gate { table: (0..rows).map(bit).collect() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    dag: Dag,
    gates: Vec<Option<Gate>>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    order: Vec<usize>,
}

impl Circuit {
    /// `inputs[i]` is the vertex carrying input `i`, `outputs[j]` the vertex
    /// read as output `j`. Inputs take no gate; every other vertex needs one
    /// whose arity equals its indegree.
    pub fn new(dag: Dag, gates: Vec<Option<Gate>>, inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        let m = dag.vertex_count();
        let order = topological_order(&dag).ok_or(Error::Cyclic)?;
        if gates.len() != m {
            return Err(Error::InvalidCircuit(format!("{} gates for {m} vertices", gates.len())));
        }
        let mut is_input = vec![false; m];
        for &v in &inputs {
            if v >= m {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: m });
            }
            if std::mem::replace(&mut is_input[v], true) {
                return Err(Error::InvalidCircuit(format!("vertex {v} labelled twice as input")));
            }
            if dag.indegree(v) != 0 {
                return Err(Error::InvalidCircuit(format!("input vertex {v} has predecessors")));
            }
        }
        let mut seen = vec![false; m];
        for &v in &outputs {
            if v >= m {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: m });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidCircuit(format!("vertex {v} labelled twice as output")));
            }
        }
        for v in 0..m {
            match (&gates[v], is_input[v]) {
                (Some(_), true) => return Err(Error::InvalidCircuit(format!("input vertex {v} has a gate"))),
                (None, false) => return Err(Error::InvalidCircuit(format!("vertex {v} has no gate"))),
                (Some(g), false) if g.arity() != dag.indegree(v) => {
                    return Err(Error::InvalidCircuit(format!(
                        "gate at {v} has arity {} but indegree {}",
                        g.arity(),
                        dag.indegree(v)
                    )))
                }
                _ => {}
            }
        }
        Ok(Circuit { dag, gates, inputs, outputs, order })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn gate(&self, v: usize) -> Option<&Gate> {
        self.gates[v].as_ref()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Values of every vertex.
    pub fn evaluate_all(&self, input: &[bool]) -> Result<Vec<bool>> {
        if input.len() != self.inputs.len() {
            return Err(Error::InvalidCircuit(format!(
                "expected {} input bits, got {}",
                self.inputs.len(),
                input.len()
            )));
        }
        let mut value = vec![false; self.dag.vertex_count()];
        for (&v, &b) in self.inputs.iter().zip(input) {
            value[v] = b;
        }
        for &v in &self.order {
            if let Some(gate) = &self.gates[v] {
                let row = self
                    .dag
                    .predecessors(v)
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (i, &u)| acc | (value[u] as usize) << i);
                value[v] = gate.apply(row);
            }
        }
        Ok(value)
    }

    pub fn evaluate(&self, input: &[bool]) -> Result<Vec<bool>> {
        let value = self.evaluate_all(input)?;
        Ok(self.outputs.iter().map(|&v| value[v]).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    /// `[vertex, hex table]` for every non-input vertex.
    gates: Vec<(usize, String)>,
}

pub fn circuit_to_json(c: &Circuit) -> String {
    let doc = CircuitJson {
        n: c.dag.vertex_count(),
        edges: c.dag.edges().iter().map(|&(u, v)| [u, v]).collect(),
        inputs: c.inputs.clone(),
        outputs: c.outputs.clone(),
        gates: c.gates.iter().enumerate().filter_map(|(v, g)| g.as_ref().map(|g| (v, g.to_hex()))).collect(),
    };
    serde_json::to_string(&doc).expect("circuit serializes")
}

pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    let doc: CircuitJson = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let dag = Dag::new(doc.n, doc.edges.into_iter().map(|[u, v]| (u, v)))?;
    let mut gates = vec![None; doc.n];
    for (v, hex) in doc.gates {
        if v >= doc.n {
            return Err(Error::VertexOutOfRange { vertex: v, vertex_count: doc.n });
        }
        gates[v] = Some(Gate::from_hex(dag.indegree(v), &hex)?);
    }
    Circuit::new(dag, gates, doc.inputs, doc.outputs)
}

/// `l(n) = ⌈log₂ n⌉`.
pub fn shift_bits(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Little-endian bits of `value`, `width` of them.
pub fn to_bits(value: usize, width: usize) -> Vec<bool> {
    (0..width).map(|i| value >> i & 1 == 1).collect()
}

pub fn from_bits(bits: &[bool]) -> usize {
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as usize) << i)
}

/// `shift_n(f ⊔ k)(j) = f((j − k) mod n)`, with `k` little-endian on `l(n)` bits.
pub fn shift_fn(n: usize, f: &[bool], k: &[bool]) -> Result<Vec<bool>> {
    if n == 0 {
        return Err(Error::param("shift needs n ≥ 1"));
    }
    if f.len() != n || k.len() != shift_bits(n) {
        return Err(Error::param(format!(
            "shift_{n} takes {n} + {} bits, got {} + {}",
            shift_bits(n),
            f.len(),
            k.len()
        )));
    }
    let k = from_bits(k) % n;
    Ok((0..n).map(|j| f[(j + n - k) % n]).collect())
}

/// A circuit whose input labels are split into standard and advice inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdviceCircuit {
    circuit: Circuit,
    standard: Vec<usize>,
    advice: Vec<usize>,
}

impl AdviceCircuit {
    /// `advice` lists input labels; the remaining labels, ascending, are standard.
    pub fn new(circuit: Circuit, advice: Vec<usize>) -> Result<Self> {
        let k = circuit.inputs.len();
        let mut is_advice = vec![false; k];
        for &i in &advice {
            if i >= k {
                return Err(Error::InvalidCircuit(format!("advice label {i} out of range")));
            }
            if std::mem::replace(&mut is_advice[i], true) {
                return Err(Error::InvalidCircuit(format!("advice label {i} repeated")));
            }
        }
        let standard = (0..k).filter(|&i| !is_advice[i]).collect();
        Ok(AdviceCircuit { circuit, standard, advice })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn standard(&self) -> &[usize] {
        &self.standard
    }

    pub fn advice(&self) -> &[usize] {
        &self.advice
    }

    /// `|In_adv| ≤ ε·|In|`.
    pub fn is_eps_advice(&self, eps: Fraction) -> bool {
        eps.bounds(self.advice.len() as u64, self.circuit.inputs.len() as u64)
    }

    fn run(&self, s: usize, t: usize) -> Result<Vec<bool>> {
        let mut input = vec![false; self.circuit.inputs.len()];
        for (i, &label) in self.standard.iter().enumerate() {
            input[label] = s >> i & 1 == 1;
        }
        for (i, &label) in self.advice.iter().enumerate() {
            input[label] = t >> i & 1 == 1;
        }
        self.circuit.evaluate(&input)
    }
}

/// Whether for every standard assignment `s` some advice `t` makes the
/// circuit output `target(s)`. `s` and `t` are little-endian over the
/// standard and advice labels.
pub fn advice_computes(a: &AdviceCircuit, target: impl Fn(&[bool]) -> Vec<bool>, budget: u128) -> Result<bool> {
    let bits = a.standard.len() + a.advice.len();
    let required = 1u128.checked_shl(bits as u32).unwrap_or(u128::MAX);
    if bits >= 64 || required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    for s in 0..1usize << a.standard.len() {
        let want = target(&to_bits(s, a.standard.len()));
        let mut found = false;
        for t in 0..1usize << a.advice.len() {
            if a.run(s, t)? == want {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest advice count `a` with `a ≤ ε(s + a)`, capped at `cap`.
fn max_advice(std_bits: usize, eps: Fraction, cap: usize) -> usize {
    (0..=cap).take_while(|&a| eps.bounds(a as u64, (std_bits + a) as u64)).last().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Satisfiable,
    Unsatisfiable,
    /// No witness found, but some patterns hit the node limit.
    Inconclusive,
}

/// Default cap on search nodes spent on one wiring pattern.
pub const DEFAULT_NODE_LIMIT: u64 = 1 << 16;
const SEARCH_CHUNK: u128 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftConfig {
    pub advice_bits: usize,
    pub wiring_patterns: u128,
    /// `wiring_patterns · 2^{s+a}`: gate rows touched by one pass over every
    /// pattern without backtracking.
    pub search_space: u128,
    /// `2^{a·2^s}` advice strategies per pattern, saturating. The backtracking
    /// search visits far fewer.
    pub advice_functions: u128,
    pub status: SearchStatus,
    pub patterns_checked: u128,
    /// Patterns abandoned at the per-pattern node limit.
    pub patterns_undecided: u128,
    /// Witness circuit JSON, with advice on the last `a` input labels.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSearchReport {
    pub n: usize,
    pub epsilon: Fraction,
    pub indeg_cap: usize,
    pub standard_bits: usize,
    pub total_search_space: u128,
    /// One entry per advice width `0, 1, …`, stopping at the first
    /// satisfiable width (larger widths are then satisfiable too).
    pub configs: Vec<ShiftConfig>,
}

/// Size of one searched configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftSpace {
    pub advice_bits: usize,
    pub wiring_patterns: u128,
    pub search_space: u128,
    pub advice_functions: u128,
}

fn wiring_choices(inputs: usize, cap: usize) -> u128 {
    (0..=cap.min(inputs)).map(|i| binomial(inputs, i)).sum()
}

/// Sizes of the configurations that would be searched.
pub fn shift_search_space(n: usize, eps: Fraction, indeg_cap: usize, advice_cap: usize) -> Vec<ShiftSpace> {
    let s = n + shift_bits(n);
    (0..=max_advice(s, eps, advice_cap))
        .map(|a| {
            let per_gate = wiring_choices(s + a, indeg_cap);
            let patterns = (0..n).fold(1u128, |acc, _| acc.saturating_mul(per_gate));
            let pass = 1u128.checked_shl((s + a) as u32).unwrap_or(u128::MAX);
            let advice_functions = a.checked_mul(1 << s).filter(|&e| e < 128).map_or(u128::MAX, |e| 1u128 << e);
            ShiftSpace {
                advice_bits: a,
                wiring_patterns: patterns,
                search_space: patterns.saturating_mul(pass),
                advice_functions,
            }
        })
        .collect()
}

/// The `rank`-th subset of `0..inputs` with at most `cap` elements, by size
/// then lexicographically.
fn unrank_wiring(inputs: usize, cap: usize, mut rank: u128) -> Vec<usize> {
    for size in 0..=cap.min(inputs) {
        let c = binomial(inputs, size);
        if rank < c {
            return unrank_combination(inputs, size, rank);
        }
        rank -= c;
    }
    unreachable!("rank out of range")
}

struct ShiftCsp<'a> {
    std_bits: usize,
    advice_bits: usize,
    wiring: &'a [Vec<usize>],
    targets: &'a [Vec<bool>],
}

impl ShiftCsp<'_> {
    fn row(&self, gate: usize, s: usize, t: usize) -> usize {
        let full = s | t << self.std_bits;
        self.wiring[gate].iter().enumerate().fold(0, |acc, (i, &w)| acc | (full >> w & 1) << i)
    }

    fn consistent(&self, tables: &[Vec<Option<bool>>], s: usize, t: usize) -> bool {
        tables.iter().enumerate().all(|(g, table)| table[self.row(g, s, t)].is_none_or(|v| v == self.targets[s][g]))
    }

    /// Depth-first search over `t(s)`, most constrained `s` first, failing as
    /// soon as some unassigned `s` has no consistent advice left.
    fn solve(&self, node_limit: u64) -> CspOutcome {
        let rows = 1usize << self.std_bits;
        let mut tables: Vec<Vec<Option<bool>>> = self.wiring.iter().map(|w| vec![None; 1 << w.len()]).collect();
        let mut assigned = vec![false; rows];
        let mut nodes = 0u64;
        match self.search(&mut tables, &mut assigned, &mut nodes, node_limit) {
            Some(true) => CspOutcome::Satisfiable(tables),
            Some(false) => CspOutcome::Unsatisfiable,
            None => CspOutcome::NodeLimit,
        }
    }

    fn search(
        &self,
        tables: &mut Vec<Vec<Option<bool>>>,
        assigned: &mut [bool],
        nodes: &mut u64,
        limit: u64,
    ) -> Option<bool> {
        *nodes += 1;
        if *nodes > limit {
            return None;
        }
        let choices = 1usize << self.advice_bits;
        let mut pick: Option<(usize, usize)> = None;
        for s in (0..assigned.len()).filter(|&s| !assigned[s]) {
            let open = (0..choices).filter(|&t| self.consistent(tables, s, t)).count();
            if open == 0 {
                return Some(false);
            }
            if pick.is_none_or(|(_, best)| open < best) {
                pick = Some((s, open));
            }
        }
        let Some((s, _)) = pick else { return Some(true) };
        assigned[s] = true;
        for t in 0..choices {
            if !self.consistent(tables, s, t) {
                continue;
            }
            let mut set = Vec::new();
            for (g, table) in tables.iter_mut().enumerate() {
                let r = self.row(g, s, t);
                if table[r].is_none() {
                    table[r] = Some(self.targets[s][g]);
                    set.push((g, r));
                }
            }
            match self.search(tables, assigned, nodes, limit) {
                Some(false) => {}
                other => return other,
            }
            for (g, r) in set {
                tables[g][r] = None;
            }
        }
        assigned[s] = false;
        Some(false)
    }
}

enum CspOutcome {
    Satisfiable(Vec<Vec<Option<bool>>>),
    Unsatisfiable,
    NodeLimit,
}

fn build_witness(
    n: usize,
    std_bits: usize,
    advice_bits: usize,
    wiring: &[Vec<usize>],
    tables: &[Vec<Option<bool>>],
) -> Result<AdviceCircuit> {
    let inputs = std_bits + advice_bits;
    let edges = wiring.iter().enumerate().flat_map(|(g, w)| w.iter().map(move |&i| (i, inputs + g)));
    let dag = Dag::new(inputs + n, edges)?;
    let mut gates = vec![None; inputs];
    gates.extend(tables.iter().map(|t| Some(Gate { table: t.iter().map(|v| v.unwrap_or(false)).collect() })));
    let circuit = Circuit::new(dag, gates, (0..inputs).collect(), (inputs..inputs + n).collect())?;
    AdviceCircuit::new(circuit, (std_bits..inputs).collect())
}

/// Searches depth-1 advice circuits for `shift_n`: every output gate reads at
/// most `indeg_cap` input wires. Advice widths run from 0 up to the largest
/// `ε`-advice width (at most `advice_cap`). Fails before searching when the
/// summed search space exceeds `budget`. Each pattern gets at most
/// `node_limit` search nodes.
pub fn search_depth1_advice_shift(
    n: usize,
    eps: Fraction,
    indeg_cap: usize,
    advice_cap: usize,
    budget: u128,
    node_limit: u64,
) -> Result<ShiftSearchReport> {
    if n == 0 {
        return Err(Error::param("shift needs n ≥ 1"));
    }
    if eps > Fraction::one() {
        return Err(Error::param(format!("epsilon {eps} must lie in [0, 1]")));
    }
    let std_bits = n + shift_bits(n);
    let sizes = shift_search_space(n, eps, indeg_cap, advice_cap);
    let total = sizes.iter().fold(0u128, |acc, s| acc.saturating_add(s.search_space));
    if total > budget || std_bits >= 20 {
        return Err(Error::BudgetExceeded { required: total, budget });
    }
    let targets: Vec<Vec<bool>> = (0..1usize << std_bits)
        .map(|s| {
            let bits = to_bits(s, std_bits);
            shift_fn(n, &bits[..n], &bits[n..]).expect("widths match")
        })
        .collect();
    let mut configs = Vec::new();
    for size in sizes {
        let (advice_bits, patterns) = (size.advice_bits, size.wiring_patterns);
        let inputs = std_bits + advice_bits;
        let per_gate = wiring_choices(inputs, indeg_cap);
        let wiring_of = |rank: u128| {
            let mut rest = rank;
            let mut wiring = vec![Vec::new(); n];
            for g in (0..n).rev() {
                wiring[g] = unrank_wiring(inputs, indeg_cap, rest % per_gate);
                rest /= per_gate;
            }
            wiring
        };
        let mut undecided = 0u128;
        let mut checked = 0u128;
        let mut found = None;
        let mut start = 0u128;
        while start < patterns && found.is_none() {
            let end = (start + SEARCH_CHUNK).min(patterns);
            let outcomes: Vec<CspOutcome> = (start as u64..end as u64)
                .into_par_iter()
                .map(|rank| {
                    let wiring = wiring_of(rank as u128);
                    ShiftCsp { std_bits, advice_bits, wiring: &wiring, targets: &targets }.solve(node_limit)
                })
                .collect();
            for (offset, outcome) in outcomes.into_iter().enumerate() {
                checked += 1;
                match outcome {
                    CspOutcome::Satisfiable(tables) => {
                        found = Some((wiring_of(start + offset as u128), tables));
                        break;
                    }
                    CspOutcome::Unsatisfiable => {}
                    CspOutcome::NodeLimit => undecided += 1,
                }
            }
            start = end;
        }
        let (status, witness) = match found {
            Some((wiring, tables)) => {
                let w = build_witness(n, std_bits, advice_bits, &wiring, &tables)?;
                let target = |s: &[bool]| shift_fn(n, &s[..n], &s[n..]).expect("widths match");
                if !advice_computes(&w, target, u128::MAX)? {
                    return Err(Error::InvalidCircuit("search produced an unsound witness".into()));
                }
                (SearchStatus::Satisfiable, Some(circuit_to_json(w.circuit())))
            }
            None if undecided > 0 => (SearchStatus::Inconclusive, None),
            None => (SearchStatus::Unsatisfiable, None),
        };
        configs.push(ShiftConfig {
            advice_bits,
            wiring_patterns: patterns,
            search_space: size.search_space,
            advice_functions: size.advice_functions,
            status,
            patterns_checked: checked,
            patterns_undecided: undecided,
            witness,
        });
        if status == SearchStatus::Satisfiable {
            break;
        }
    }
    Ok(ShiftSearchReport { n, epsilon: eps, indeg_cap, standard_bits: std_bits, total_search_space: total, configs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and_circuit() -> Circuit {
        let dag = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        let and = Gate::from_fn(2, |r| r == 3);
        Circuit::new(dag, vec![None, None, Some(and)], vec![0, 1], vec![2]).unwrap()
    }

    #[test]
    fn identity_wire_and_and_gate() {
        let dag = Dag::new(2, [(0, 1)]).unwrap();
        let id = Circuit::new(dag, vec![None, Some(Gate::from_fn(1, |r| r == 1))], vec![0], vec![1]).unwrap();
        assert_eq!(id.evaluate(&[true]).unwrap(), vec![true]);
        assert_eq!(id.evaluate(&[false]).unwrap(), vec![false]);
        let c = and_circuit();
        assert_eq!(c.evaluate(&[true, true]).unwrap(), vec![true]);
        assert_eq!(c.evaluate(&[false, true]).unwrap(), vec![false]);
    }

    #[test]
    fn construction_errors() {
        let dag = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        let bad_arity = Circuit::new(dag.clone(), vec![None, None, Some(Gate::constant(true))], vec![0, 1], vec![2]);
        assert!(matches!(bad_arity, Err(Error::InvalidCircuit(_))));
        let missing = Circuit::new(dag.clone(), vec![None, None, None], vec![0, 1], vec![2]);
        assert!(matches!(missing, Err(Error::InvalidCircuit(_))));
        let cyclic = Dag::new(2, [(0, 1), (1, 0)]).unwrap();
        let g = Some(Gate::from_fn(1, |r| r == 1));
        assert_eq!(Circuit::new(cyclic, vec![g.clone(), g], vec![], vec![0]), Err(Error::Cyclic));
    }

    #[test]
    fn hex_round_trip() {
        let g = Gate::from_fn(3, |r| r % 3 == 0);
        assert_eq!(g.to_hex(), "49");
        assert_eq!(Gate::from_hex(3, "49").unwrap(), g);
        assert_eq!(Gate::constant(true).to_hex(), "1");
        assert!(Gate::from_hex(0, "3").is_err());
        let c = and_circuit();
        assert_eq!(circuit_from_json(&circuit_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_bits(1), 0);
        assert_eq!(shift_bits(4), 2);
        assert_eq!(shift_bits(5), 3);
        let f = [true, false, false, false];
        assert_eq!(shift_fn(4, &f, &[false, false]).unwrap(), f);
        assert_eq!(shift_fn(4, &f, &[true, false]).unwrap(), vec![false, true, false, false]);
        assert_eq!(shift_fn(1, &[true], &[]).unwrap(), vec![true]);
        // k = 6 on n = 5 wraps to 1.
        let g = [true, false, false, false, false];
        assert_eq!(shift_fn(5, &g, &to_bits(6, 3)).unwrap(), vec![false, true, false, false, false]);
    }

    #[test]
    fn advice_examples() {
        let exact = AdviceCircuit::new(and_circuit(), vec![]).unwrap();
        assert!(advice_computes(&exact, |s| vec![s[0] && s[1]], 1 << 10).unwrap());
        assert!(!advice_computes(&exact, |s| vec![s[0] || s[1]], 1 << 10).unwrap());
        let adv = AdviceCircuit::new(and_circuit(), vec![1]).unwrap();
        assert!(advice_computes(&adv, |s| vec![s[0]], 1 << 10).unwrap());
        assert!(!advice_computes(&adv, |s| vec![!s[0]], 1 << 10).unwrap());
        assert!(matches!(advice_computes(&adv, |s| vec![s[0]], 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn search_space_hand_count() {
        // n = 2: three standard inputs, each gate reads one of 1 + 3 + 3 subsets.
        let sizes = shift_search_space(2, Fraction::zero(), 2, 4);
        assert_eq!(sizes.len(), 1);
        assert_eq!((sizes[0].wiring_patterns, sizes[0].search_space, sizes[0].advice_functions), (49, 392, 1));
        let quarter = shift_search_space(2, Fraction::new(1, 4).unwrap(), 2, 4);
        assert_eq!(quarter[1].wiring_patterns, 11 * 11);
        assert_eq!(quarter[1].advice_functions, 256);
    }

    #[test]
    fn full_fan_in_is_satisfiable() {
        let r = search_depth1_advice_shift(2, Fraction::one(), 3, 0, 1 << 20, DEFAULT_NODE_LIMIT).unwrap();
        assert_eq!(r.configs[0].status, SearchStatus::Satisfiable);
        let w = circuit_from_json(r.configs[0].witness.as_ref().unwrap()).unwrap();
        assert_eq!(w.outputs().len(), 2);
    }

    #[test]
    fn budget_error_reports_size() {
        let err = search_depth1_advice_shift(2, Fraction::zero(), 2, 0, 10, DEFAULT_NODE_LIMIT).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { required: 392, budget: 10 });
    }
}
