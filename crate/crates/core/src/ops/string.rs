//! Elementary operator symbols and canonical operator strings.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Operator family a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Fermionic,
    Majorana,
    Pauli,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Fermionic => "fermionic",
            Family::Majorana => "majorana",
            Family::Pauli => "pauli",
        }
    }

    /// Largest admissible symbol index for `modes` modes/qubits.
    pub fn max_index(self, modes: usize) -> usize {
        match self {
            Family::Majorana => 2 * modes,
            _ => modes,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fermionic" | "fermion" => Ok(Family::Fermionic),
            "majorana" => Ok(Family::Majorana),
            "pauli" | "qubit" => Ok(Family::Pauli),
            other => Err(format!("unknown operator family `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// One elementary operator. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Fermion { mode: usize, dagger: bool },
    Majorana(usize),
    Pauli { qubit: usize, axis: Axis },
}

impl Factor {
    pub fn create(mode: usize) -> Self {
        Factor::Fermion { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Factor::Fermion { mode, dagger: false }
    }

    pub fn family(&self) -> Family {
        match self {
            Factor::Fermion { .. } => Family::Fermionic,
            Factor::Majorana(_) => Family::Majorana,
            Factor::Pauli { .. } => Family::Pauli,
        }
    }

    pub fn index(&self) -> usize {
        match *self {
            Factor::Fermion { mode, .. } => mode,
            Factor::Majorana(j) => j,
            Factor::Pauli { qubit, .. } => qubit,
        }
    }

    fn sort_key(&self) -> (u8, usize, u8) {
        match *self {
            Factor::Fermion { mode, dagger } => (u8::from(!dagger), mode, 0),
            Factor::Majorana(j) => (0, j, 0),
            Factor::Pauli { qubit, axis } => (0, qubit, axis as u8),
        }
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.family()
            .cmp(&other.family())
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Fermion { mode, dagger: true } => write!(f, "{mode}^"),
            Factor::Fermion { mode, dagger: false } => write!(f, "{mode}"),
            Factor::Majorana(j) => write!(f, "g{j}"),
            Factor::Pauli { qubit, axis } => write!(f, "{}{qubit}", axis.symbol()),
        }
    }
}

/// A product of elementary operators in canonical order. The empty string is the identity.
///
/// Strings order by length first, so constants print before one-body terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OpString(Vec<Factor>);

impl OpString {
    pub fn identity() -> Self {
        OpString(Vec::new())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(Factor::index).max().unwrap_or(0)
    }

    /// True when the string is diagonal in the occupation / computational basis.
    pub fn is_diagonal(&self) -> bool {
        let mut created = Vec::new();
        let mut destroyed = Vec::new();
        let mut majoranas = Vec::new();
        for f in &self.0 {
            match *f {
                Factor::Fermion { mode, dagger: true } => created.push(mode),
                Factor::Fermion { mode, dagger: false } => destroyed.push(mode),
                Factor::Majorana(j) => majoranas.push(j),
                Factor::Pauli { axis, .. } => {
                    if axis != Axis::Z {
                        return false;
                    }
                }
            }
        }
        if !majoranas.is_empty() {
            // gamma_{2p-1} gamma_{2p} pairs only
            if majoranas.len() % 2 != 0 {
                return false;
            }
            return majoranas
                .chunks(2)
                .all(|w| w[0] % 2 == 1 && w[1] == w[0] + 1);
        }
        created.sort_unstable();
        destroyed.sort_unstable();
        created == destroyed
    }
}

impl Ord for OpString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for OpString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OpString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Phase produced while reordering: `sign * i^quarter`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Phase {
    pub quarter: u8,
}

impl Phase {
    pub const ONE: Phase = Phase { quarter: 0 };

    pub fn neg(self) -> Phase {
        Phase {
            quarter: (self.quarter + 2) % 4,
        }
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase {
            quarter: (self.quarter + other.quarter) % 4,
        }
    }

    pub fn to_complex<T: crate::Real>(self) -> crate::Cplx<T> {
        let one = T::one();
        let zero = T::zero();
        match self.quarter {
            0 => num_complex::Complex::new(one, zero),
            1 => num_complex::Complex::new(zero, one),
            2 => num_complex::Complex::new(-one, zero),
            _ => num_complex::Complex::new(zero, -one),
        }
    }
}

/// Reduces an arbitrary word of factors of one family to a sum of canonical strings.
pub(crate) fn canonicalize(word: Vec<Factor>) -> Vec<(Phase, OpString)> {
    let family = match word.first() {
        None => return vec![(Phase::ONE, OpString::identity())],
        Some(f) => f.family(),
    };
    match family {
        Family::Fermionic => normal_order_fermions(word),
        Family::Majorana => order_majoranas(word).into_iter().collect(),
        Family::Pauli => vec![order_paulis(word)],
    }
}

/// Normal ordering under {a_p, a_q^dag} = delta_pq: creations first, indices decreasing.
fn normal_order_fermions(word: Vec<Factor>) -> Vec<(Phase, OpString)> {
    let mut out = Vec::new();
    let mut stack = vec![(Phase::ONE, word)];
    while let Some((mut phase, mut w)) = stack.pop() {
        let mut vanished = false;
        'scan: for i in 1..w.len() {
            for j in (1..=i).rev() {
                let (l, r) = match (w[j - 1], w[j]) {
                    (
                        Factor::Fermion { mode: lm, dagger: ld },
                        Factor::Fermion { mode: rm, dagger: rd },
                    ) => ((lm, ld), (rm, rd)),
                    _ => unreachable!("mixed families in fermionic word"),
                };
                match (l.1, r.1) {
                    (false, true) => {
                        if l.0 == r.0 {
                            let mut contracted = w.clone();
                            contracted.drain(j - 1..=j);
                            stack.push((phase, contracted));
                        }
                        w.swap(j - 1, j);
                        phase = phase.neg();
                    }
                    (true, false) => break,
                    _ => {
                        if l.0 == r.0 {
                            vanished = true;
                            break 'scan;
                        }
                        if r.0 > l.0 {
                            w.swap(j - 1, j);
                            phase = phase.neg();
                        } else {
                            break;
                        }
                    }
                }
            }
        }
        if !vanished {
            out.push((phase, OpString(w)));
        }
    }
    out
}

/// Sorts Majorana indices with {g_p, g_q} = 2 delta_pq, so g_p^2 = 1.
fn order_majoranas(mut w: Vec<Factor>) -> Option<(Phase, OpString)> {
    let mut phase = Phase::ONE;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1].index() > w[j].index() {
            w.swap(j - 1, j);
            phase = phase.neg();
            j -= 1;
        }
    }
    let mut out: Vec<Factor> = Vec::with_capacity(w.len());
    for f in w {
        if out.last().map(Factor::index) == Some(f.index()) {
            out.pop();
        } else {
            out.push(f);
        }
    }
    Some((phase, OpString(out)))
}

/// Single-qubit product sigma_a sigma_b = delta_ab + i eps_abc sigma_c.
fn pauli_product(a: Axis, b: Axis) -> (Phase, Option<Axis>) {
    use Axis::*;
    match (a, b) {
        (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, None),
        (X, Y) => (Phase { quarter: 1 }, Some(Z)),
        (Y, X) => (Phase { quarter: 3 }, Some(Z)),
        (Y, Z) => (Phase { quarter: 1 }, Some(X)),
        (Z, Y) => (Phase { quarter: 3 }, Some(X)),
        (Z, X) => (Phase { quarter: 1 }, Some(Y)),
        (X, Z) => (Phase { quarter: 3 }, Some(Y)),
    }
}

fn order_paulis(w: Vec<Factor>) -> (Phase, OpString) {
    // Paulis on different qubits commute, so a stable sort by qubit keeps per-qubit order.
    let mut w = w;
    w.sort_by_key(Factor::index);
    let mut phase = Phase::ONE;
    let mut out: Vec<Factor> = Vec::with_capacity(w.len());
    for f in w {
        let Factor::Pauli { qubit, axis } = f else {
            unreachable!("mixed families in Pauli word")
        };
        match out.last().copied() {
            Some(Factor::Pauli { qubit: q, axis: prev }) if q == qubit => {
                out.pop();
                let (p, res) = pauli_product(prev, axis);
                phase = phase.times(p);
                if let Some(axis) = res {
                    out.push(Factor::Pauli { qubit, axis });
                }
            }
            _ => out.push(f),
        }
    }
    (phase, OpString(out))
}

/// Conjugate transpose of a canonical string, re-canonicalized.
pub(crate) fn adjoint_string(s: &OpString) -> Vec<(Phase, OpString)> {
    let word: Vec<Factor> = s
        .0
        .iter()
        .rev()
        .map(|f| match *f {
            Factor::Fermion { mode, dagger } => Factor::Fermion {
                mode,
                dagger: !dagger,
            },
            other => other,
        })
        .collect();
    canonicalize(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: usize) -> Factor {
        Factor::create(m)
    }
    fn a(m: usize) -> Factor {
        Factor::annihilate(m)
    }

    #[test]
    fn annihilator_creator_contracts() {
        let out = canonicalize(vec![a(1), c(1)]);
        assert_eq!(out.len(), 2);
        assert!(out.contains(&(Phase::ONE, OpString::identity())));
        assert!(out.contains(&(Phase::ONE.neg(), OpString(vec![c(1), a(1)]))));
    }

    #[test]
    fn repeated_creator_vanishes() {
        assert!(canonicalize(vec![c(2), c(1), c(2)]).is_empty());
    }

    #[test]
    fn creators_sorted_decreasing() {
        let out = canonicalize(vec![c(1), c(3), a(1), a(2)]);
        assert_eq!(out, vec![(Phase::ONE, OpString(vec![c(3), c(1), a(2), a(1)]))]);
    }

    #[test]
    fn majorana_square_is_identity() {
        let out = canonicalize(vec![Factor::Majorana(2), Factor::Majorana(1), Factor::Majorana(2)]);
        assert_eq!(out, vec![(Phase::ONE.neg(), OpString(vec![Factor::Majorana(1)]))]);
    }

    #[test]
    fn pauli_table() {
        let x = Factor::Pauli { qubit: 1, axis: Axis::X };
        let y = Factor::Pauli { qubit: 1, axis: Axis::Y };
        let out = canonicalize(vec![x, y]);
        assert_eq!(
            out,
            vec![(Phase { quarter: 1 }, OpString(vec![Factor::Pauli { qubit: 1, axis: Axis::Z }]))]
        );
    }

    #[test]
    fn diagonal_detection() {
        assert!(OpString(vec![c(2), c(1), a(2), a(1)]).is_diagonal());
        assert!(!OpString(vec![c(2), a(1)]).is_diagonal());
        assert!(OpString(vec![Factor::Majorana(3), Factor::Majorana(4)]).is_diagonal());
        assert!(!OpString(vec![Factor::Majorana(2), Factor::Majorana(3)]).is_diagonal());
    }
}
