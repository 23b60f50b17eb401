//! Root data, reduced words, and cominuscule parabolic combinatorics.
//!
//! Roots are stored as integer coefficient vectors in the simple-root basis,
//! with Bourbaki numbering of the Dynkin diagram. All pairings
//! `<beta, gamma^vee> = 2(beta,gamma)/(gamma,gamma)` are computed from an
//! integer Gram matrix, so everything stays exact.
//!
//! The parabolic data assembled here (the ordering of the roots in the
//! unipotent radical, the pairing matrix, the commutation pairs `S_j`, and
//! the quadratic-form values `q_k`) is exactly what the exponential-sum
//! evaluators consume.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A root, as coefficients over the simple roots.
pub type Root = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E6,
    E7,
}

impl CartanType {
    pub fn parse(s: &str) -> Option<CartanType> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Some(CartanType::A),
            "B" => Some(CartanType::B),
            "C" => Some(CartanType::C),
            "D" => Some(CartanType::D),
            "E6" | "E" => Some(CartanType::E6),
            "E7" => Some(CartanType::E7),
            _ => None,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A => write!(f, "A"),
            CartanType::B => write!(f, "B"),
            CartanType::C => write!(f, "C"),
            CartanType::D => write!(f, "D"),
            CartanType::E6 => write!(f, "E6"),
            CartanType::E7 => write!(f, "E7"),
        }
    }
}

/// A sequence of simple-reflection indices (1-based, Bourbaki labels).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedWord {
    pub indices: Vec<usize>,
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Root datum of a simple group of type A, B, C, D, E6 or E7.
///
/// E8, F4 and G2 are rejected: they admit no cominuscule parabolic, and G2
/// is additionally outside the nonnegative-pairing regime.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// `cartan_matrix[i][j] = <alpha_{j+1}, alpha_{i+1}^vee>`.
    pub cartan_matrix: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
    pub simple_roots: Vec<Root>,
    pub positive_roots: Vec<Root>,
    pub highest_root: Root,
}

fn dynkin_edges(t: CartanType, rank: usize) -> Vec<(usize, usize)> {
    // 1-based node pairs joined by an edge (single unless said otherwise)
    match t {
        CartanType::A | CartanType::B | CartanType::C => {
            (1..rank).map(|i| (i, i + 1)).collect()
        }
        CartanType::D => {
            let mut e: Vec<(usize, usize)> = (1..rank - 1).map(|i| (i, i + 1)).collect();
            e.push((rank - 2, rank));
            e
        }
        CartanType::E6 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
        CartanType::E7 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
    }
}

impl RootDatum {
    /// Build the root datum for the given type and rank.
    pub fn new(t: CartanType, rank: usize) -> Result<RootDatum, Error> {
        let ok = match t {
            CartanType::A => rank >= 1,
            CartanType::B | CartanType::C => rank >= 2,
            CartanType::D => rank >= 3,
            CartanType::E6 => rank == 6,
            CartanType::E7 => rank == 7,
        };
        if !ok {
            return Err(Error::UnsupportedType(format!("{t}{rank}")));
        }

        // Cartan matrix A[i][j] = <alpha_j, alpha_i^vee> from the diagram.
        let mut a = vec![vec![0i64; rank]; rank];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (u, v) in dynkin_edges(t, rank) {
            a[u - 1][v - 1] = -1;
            a[v - 1][u - 1] = -1;
        }
        // double bonds: B_r has short alpha_r, C_r has long alpha_r
        match t {
            CartanType::B => {
                // <alpha_{r-1}, alpha_r^vee> = -2
                a[rank - 1][rank - 2] = -2;
            }
            CartanType::C => {
                // <alpha_r, alpha_{r-1}^vee> = -2
                a[rank - 2][rank - 1] = -2;
            }
            _ => {}
        }

        // Gram matrix (alpha_i, alpha_j) = d_i * A[i][j], d from root lengths
        let d: Vec<i64> = match t {
            CartanType::B => (0..rank).map(|i| if i == rank - 1 { 1 } else { 2 }).collect(),
            CartanType::C => (0..rank).map(|i| if i == rank - 1 { 2 } else { 1 }).collect(),
            _ => vec![1; rank],
        };
        let mut gram = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                gram[i][j] = d[i] * a[i][j];
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                assert_eq!(gram[i][j], gram[j][i], "Gram matrix must be symmetric");
            }
        }

        let simple_roots: Vec<Root> = (0..rank)
            .map(|i| {
                let mut v = vec![0i64; rank];
                v[i] = 1;
                v
            })
            .collect();

        let mut datum = RootDatum {
            cartan_type: t,
            rank,
            cartan_matrix: a,
            gram,
            simple_roots: simple_roots.clone(),
            positive_roots: Vec::new(),
            highest_root: Vec::new(),
        };

        // close the simple roots under reflections, keeping positives
        let mut roots: Vec<Root> = simple_roots;
        let mut seen: std::collections::BTreeSet<Root> = roots.iter().cloned().collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in frontier {
                for i in 1..=rank {
                    let s = datum.simple_reflect(i, &r);
                    if s.iter().all(|&c| c >= 0) && seen.insert(s.clone()) {
                        roots.push(s.clone());
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let highest = roots.last().unwrap().clone();
        assert!(
            roots
                .iter()
                .all(|r| r.iter().zip(&highest).all(|(a, b)| a <= b)),
            "highest root must dominate componentwise"
        );
        datum.positive_roots = roots;
        datum.highest_root = highest;
        Ok(datum)
    }

    /// Parse e.g. ("A", 3), ("E6", 6). G2/F4/E8 are rejected.
    pub fn from_names(type_name: &str, rank: usize) -> Result<RootDatum, Error> {
        match type_name.to_ascii_uppercase().as_str() {
            "G" | "G2" | "F" | "F4" | "E8" => {
                Err(Error::UnsupportedType(format!("{type_name}{rank}")))
            }
            "E" | "E6" | "E7" => match rank {
                6 => RootDatum::new(CartanType::E6, 6),
                7 => RootDatum::new(CartanType::E7, 7),
                _ => Err(Error::UnsupportedType(format!("E{rank}"))),
            },
            s => {
                let t = CartanType::parse(s)
                    .ok_or_else(|| Error::UnsupportedType(format!("{type_name}{rank}")))?;
                RootDatum::new(t, rank)
            }
        }
    }

    /// `<beta, gamma^vee> = 2 (beta, gamma) / (gamma, gamma)`.
    pub fn pairing(&self, beta: &Root, gamma: &Root) -> i64 {
        let bg = self.inner(beta, gamma);
        let gg = self.inner(gamma, gamma);
        debug_assert!(gg > 0);
        debug_assert_eq!((2 * bg) % gg, 0, "pairing must be integral");
        2 * bg / gg
    }

    fn inner(&self, x: &Root, y: &Root) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        s
    }

    /// Apply the simple reflection `s_i` (1-based `i`) to a vector in the
    /// root lattice.
    pub fn simple_reflect(&self, i: usize, v: &Root) -> Root {
        let i0 = i - 1;
        // <v, alpha_i^vee> = sum_j v_j A[i][j]
        let c: i64 = (0..self.rank).map(|j| v[j] * self.cartan_matrix[i0][j]).sum();
        let mut out = v.clone();
        out[i0] -= c;
        out
    }

    /// Apply a word `s_{i_1} ... s_{i_k}` to a vector (rightmost letter acts
    /// first).
    pub fn apply_word(&self, word: &[usize], v: &Root) -> Root {
        let mut out = v.clone();
        for &i in word.iter().rev() {
            out = self.simple_reflect(i, &out);
        }
        out
    }

    /// Number of positive roots sent negative by the word's product.
    pub fn inversion_count(&self, word: &[usize]) -> usize {
        self.positive_roots
            .iter()
            .filter(|r| {
                let img = self.apply_word(word, r);
                img.iter().all(|&c| c <= 0)
            })
            .count()
    }

    /// A word is reduced iff its length equals its inversion count.
    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.inversion_count(word) == word.len()
    }

    /// Coefficient of the omitted node in the highest root is 1.
    pub fn is_cominuscule(&self, node: usize) -> Result<bool, Error> {
        if node == 0 || node > self.rank {
            return Err(Error::BadNode(node, self.rank));
        }
        Ok(self.highest_root[node - 1] == 1)
    }

    /// Membership in Littelmann's list of braidless fundamental weights.
    pub fn is_braidless(&self, node: usize) -> Result<bool, Error> {
        if node == 0 || node > self.rank {
            return Err(Error::BadNode(node, self.rank));
        }
        let r = self.rank;
        Ok(match self.cartan_type {
            CartanType::A => true,
            CartanType::B | CartanType::C => node == 1 || node == r,
            CartanType::D => node == 1 || node == r - 1 || node == r,
            CartanType::E6 => node == 1 || node == 6,
            CartanType::E7 => node == 7,
        })
    }

    /// Greedy-descent reduced word for the long element, either of the whole
    /// group or of the Levi generated by `restrict_to`.
    pub fn long_word(&self, restrict_to: Option<&[usize]>) -> ReducedWord {
        let allowed: Vec<usize> = match restrict_to {
            Some(s) => s.to_vec(),
            None => (1..=self.rank).collect(),
        };
        // pairings of a dominant regular weight of the subsystem with each coroot
        let mut t = vec![0i64; self.rank];
        for &i in &allowed {
            t[i - 1] = 1;
        }
        let mut word = Vec::new();
        loop {
            let Some(&i) = allowed.iter().find(|&&i| t[i - 1] > 0) else {
                break;
            };
            let ti = t[i - 1];
            for j in 0..self.rank {
                t[j] -= ti * self.cartan_matrix[j][i - 1];
            }
            word.push(i);
        }
        ReducedWord { indices: word }
    }
}

/// Pairs `(k, k')` with `i gamma_k - i' gamma_{k'} = -alpha_j`; for a
/// cominuscule parabolic `i = i' = 1` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationPair {
    pub k: usize,
    pub kp: usize,
    pub i: i64,
    pub ip: i64,
}

/// Root combinatorics of a maximal parabolic: the ordered roots of the
/// unipotent radical, their pairing matrix, the commutation pairs per Levi
/// simple root, and the quadratic form values on coroots.
#[derive(Debug, Clone)]
pub struct ParabolicData {
    pub datum: RootDatum,
    pub node: usize,
    pub word_m: ReducedWord,
    pub word_p: ReducedWord,
    /// `gamma_1 > ... > gamma_N` in the word ordering; `gamma_N` is the
    /// omitted simple root.
    pub gammas: Vec<Root>,
    /// `pairing[j][k] = <gamma_{j+1}, gamma_{k+1}^vee>`.
    pub pairing: Vec<Vec<i64>>,
    /// Commutation pairs per Levi node (key: 1-based simple root index).
    pub commutation_pairs: BTreeMap<usize, Vec<CommutationPair>>,
    /// `q_k = Q(gamma_k^vee)`.
    pub q_values: Vec<i64>,
    pub cominuscule: bool,
}

/// A W-invariant quadratic form on coroots, given by its values on the
/// simple coroots. Invariance forces equal values on roots of equal length.
#[derive(Debug, Clone)]
pub struct CorootForm {
    pub values: Vec<i64>,
}

impl CorootForm {
    pub fn constant(rank: usize, q: i64) -> CorootForm {
        CorootForm {
            values: vec![q; rank],
        }
    }
}

impl ParabolicData {
    /// Assemble the parabolic data for a braidless maximal parabolic; the
    /// exponential-sum evaluators additionally require it to be cominuscule.
    pub fn build(datum: RootDatum, node: usize, q: &CorootForm) -> Result<ParabolicData, Error> {
        if node == 0 || node > datum.rank {
            return Err(Error::BadNode(node, datum.rank));
        }
        if !datum.is_braidless(node)? {
            return Err(Error::NotBraidless(node));
        }
        if q.values.len() != datum.rank {
            return Err(Error::LengthMismatch {
                expected: datum.rank,
                got: q.values.len(),
            });
        }
        // W-invariance: values must agree on simple roots of equal length
        for i in 0..datum.rank {
            for j in 0..datum.rank {
                if datum.gram[i][i] == datum.gram[j][j] && q.values[i] != q.values[j] {
                    return Err(Error::Invalid(
                        "quadratic form values must be constant on root-length classes".into(),
                    ));
                }
            }
        }
        let cominuscule = datum.is_cominuscule(node)?;

        let levi: Vec<usize> = (1..=datum.rank).filter(|&i| i != node).collect();
        let word_m = datum.long_word(Some(&levi));
        // extend the Levi word greedily to a reduced word for w_0
        let mut t = vec![1i64; datum.rank];
        let apply = |t: &mut Vec<i64>, i: usize, datum: &RootDatum| {
            let ti = t[i - 1];
            for j in 0..datum.rank {
                t[j] -= ti * datum.cartan_matrix[j][i - 1];
            }
        };
        for &i in &word_m.indices {
            debug_assert!(t[i - 1] > 0);
            apply(&mut t, i, &datum);
        }
        let mut word_p = Vec::new();
        loop {
            let Some(i) = (1..=datum.rank).find(|&i| t[i - 1] > 0) else {
                break;
            };
            apply(&mut t, i, &datum);
            word_p.push(i);
        }
        let n_expected = datum
            .positive_roots
            .iter()
            .filter(|r| r[node - 1] > 0)
            .count();
        assert_eq!(word_p.len(), n_expected, "w^P length must match |Phi_P|");

        // gamma_j = w_M s_{i_{t+1}} ... s_{i_{t+j-1}} (alpha_{i_{t+j}})
        let mut gammas = Vec::with_capacity(word_p.len());
        for j in 0..word_p.len() {
            let mut v = datum.simple_roots[word_p[j] - 1].clone();
            for &i in word_p[..j].iter().rev() {
                v = datum.simple_reflect(i, &v);
            }
            v = datum.apply_word(&word_m.indices, &v);
            gammas.push(v);
        }
        let n = gammas.len();
        assert_eq!(
            gammas[n - 1],
            datum.simple_roots[node - 1],
            "gamma_N must be the omitted simple root"
        );

        let mut pairing = vec![vec![0i64; n]; n];
        for j in 0..n {
            for k in 0..n {
                pairing[j][k] = datum.pairing(&gammas[j], &gammas[k]);
            }
        }

        // S_j: scan all pairs and small positive coefficients
        let mut commutation_pairs: BTreeMap<usize, Vec<CommutationPair>> = BTreeMap::new();
        let max_coeff = 4i64;
        for &j in &levi {
            let alpha_j = &datum.simple_roots[j - 1];
            let mut pairs = Vec::new();
            for k in 2..=n {
                for kp in 1..k {
                    for i in 1..=max_coeff {
                        for ip in 1..=max_coeff {
                            let cand: Root = (0..datum.rank)
                                .map(|c| i * gammas[k - 1][c] - ip * gammas[kp - 1][c])
                                .collect();
                            let neg: Root = alpha_j.iter().map(|&c| -c).collect();
                            if cand == neg {
                                pairs.push(CommutationPair { k, kp, i, ip });
                            }
                        }
                    }
                }
            }
            if !pairs.is_empty() {
                commutation_pairs.insert(j, pairs);
            }
        }

        // q on coroots, extended by W-invariance (equal root lengths share a
        // W-orbit within an irreducible system)
        let q_values: Vec<i64> = gammas
            .iter()
            .map(|g| {
                let len = datum.inner(g, g);
                let i = (0..datum.rank)
                    .find(|&i| datum.gram[i][i] == len)
                    .expect("every root length is realized by a simple root");
                q.values[i]
            })
            .collect();

        Ok(ParabolicData {
            datum,
            node,
            word_m,
            word_p: ReducedWord { indices: word_p },
            gammas,
            pairing,
            commutation_pairs,
            q_values,
            cominuscule,
        })
    }

    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// `ord_p(D_j) = l_j + sum_{i>j} <gamma_j, gamma_i^vee> l_i`
    /// (1-based `j`).
    pub fn modulus_exponent(&self, ell: &[u32], j: usize) -> Result<i64, Error> {
        if ell.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: ell.len(),
            });
        }
        let mut e = ell[j - 1] as i64;
        for i in j + 1..=self.n() {
            e += self.pairing[j - 1][i - 1] * ell[i - 1] as i64;
        }
        Ok(e)
    }

    /// `ord_p D(k, k'; alpha_j)` for a commutation pair, from the definition
    /// in terms of the `gamma` pairings (not via the modulus identity, which
    /// is checked against this as a theorem).
    pub fn denominator_exponent(
        &self,
        ell: &[u32],
        pair: (usize, usize),
        j: usize,
    ) -> Result<i64, Error> {
        if ell.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: ell.len(),
            });
        }
        let (k, kp) = pair;
        let entry = self
            .commutation_pairs
            .get(&j)
            .and_then(|ps| ps.iter().find(|p| p.k == k && p.kp == kp))
            .ok_or(Error::NotACommutationPair(k, kp, j))?;
        let alpha_j = &self.datum.simple_roots[j - 1];
        let mut e = entry.i * ell[k - 1] as i64 + entry.ip * ell[kp - 1] as i64;
        for l in k..=self.n() {
            e += self.datum.pairing(alpha_j, &self.gammas[l - 1]) * ell[l - 1] as i64;
        }
        for l in kp + 1..k {
            e += entry.ip * self.pairing[kp - 1][l - 1] * ell[l - 1] as i64;
        }
        Ok(e)
    }

    /// `<alpha_j, gamma_i^vee>` for a simple root (1-based both).
    pub fn alpha_gamma_pairing(&self, j: usize, i: usize) -> i64 {
        self.datum
            .pairing(&self.datum.simple_roots[j - 1], &self.gammas[i - 1])
    }

    /// Coefficient of `alpha_i` in `gamma_k`, i.e. `<gamma_k, omega_i^vee>`.
    pub fn gamma_coweight(&self, k: usize, i: usize) -> i64 {
        self.gammas[k - 1][i - 1]
    }

    /// Levi simple-root indices (all nodes except the omitted one).
    pub fn levi_nodes(&self) -> Vec<usize> {
        (1..=self.rank()).filter(|&i| i != self.node).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.datum.cartan_type.to_string(),
            "rank": self.rank(),
            "node": self.node,
            "gammas": self.gammas,
            "pairing": self.pairing,
            "commutation_pairs": self.commutation_pairs.iter().map(|(j, ps)| {
                (j.to_string(), ps.iter().map(|p| vec![p.k, p.kp]).collect::<Vec<_>>())
            }).collect::<BTreeMap<_, _>>(),
            "q_values": self.q_values,
            "cominuscule": self.cominuscule,
            "word_m": self.word_m.indices,
            "word_p": self.word_p.indices,
        })
    }
}

/// All cominuscule `(datum, node)` pairs of rank at most `max_rank`; the
/// structural acceptance checks sweep this list.
pub fn cominuscule_catalog(max_rank: usize) -> Vec<(RootDatum, usize)> {
    let mut out = Vec::new();
    let mut push_all = |d: RootDatum| {
        for node in 1..=d.rank {
            if d.is_cominuscule(node).unwrap() && d.is_braidless(node).unwrap() {
                out.push((d.clone(), node));
            }
        }
    };
    for r in 1..=max_rank {
        push_all(RootDatum::new(CartanType::A, r).unwrap());
    }
    for r in 2..=max_rank {
        push_all(RootDatum::new(CartanType::B, r).unwrap());
    }
    for r in 2..=max_rank {
        push_all(RootDatum::new(CartanType::C, r).unwrap());
    }
    for r in 3..=max_rank {
        push_all(RootDatum::new(CartanType::D, r).unwrap());
    }
    if max_rank >= 6 {
        push_all(RootDatum::new(CartanType::E6, 6).unwrap());
    }
    if max_rank >= 7 {
        push_all(RootDatum::new(CartanType::E7, 7).unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(v: &[i64]) -> Root {
        v.to_vec()
    }

    #[test]
    fn datum_counts_and_highest_roots() {
        let a3 = RootDatum::new(CartanType::A, 3).unwrap();
        assert_eq!(a3.positive_roots.len(), 6);
        assert_eq!(a3.highest_root, root(&[1, 1, 1]));

        let d4 = RootDatum::new(CartanType::D, 4).unwrap();
        assert_eq!(d4.positive_roots.len(), 12);

        let b3 = RootDatum::new(CartanType::B, 3).unwrap();
        assert_eq!(b3.positive_roots.len(), 9);
        assert_eq!(b3.highest_root, root(&[1, 2, 2]));

        let c3 = RootDatum::new(CartanType::C, 3).unwrap();
        assert_eq!(c3.positive_roots.len(), 9);
        assert_eq!(c3.highest_root, root(&[2, 2, 1]));

        let e6 = RootDatum::new(CartanType::E6, 6).unwrap();
        assert_eq!(e6.positive_roots.len(), 36);
        let e7 = RootDatum::new(CartanType::E7, 7).unwrap();
        assert_eq!(e7.positive_roots.len(), 63);

        assert!(RootDatum::from_names("G", 2).is_err());
        assert!(RootDatum::from_names("F", 4).is_err());
        assert!(RootDatum::from_names("E8", 8).is_err());
    }

    #[test]
    fn cartan_matrix_shape() {
        for (t, r) in [
            (CartanType::A, 4),
            (CartanType::B, 3),
            (CartanType::C, 3),
            (CartanType::D, 5),
            (CartanType::E6, 6),
        ] {
            let d = RootDatum::new(t, r).unwrap();
            for i in 0..r {
                assert_eq!(d.cartan_matrix[i][i], 2);
                for j in 0..r {
                    if i != j {
                        assert!(d.cartan_matrix[i][j] <= 0);
                        assert_eq!(d.cartan_matrix[i][j] == 0, d.cartan_matrix[j][i] == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn cominuscule_and_braidless() {
        let a3 = RootDatum::new(CartanType::A, 3).unwrap();
        assert!(a3.is_cominuscule(2).unwrap());
        let b3 = RootDatum::new(CartanType::B, 3).unwrap();
        assert!(!b3.is_cominuscule(2).unwrap());
        assert!(b3.is_braidless(1).unwrap());
        assert!(!b3.is_braidless(2).unwrap());
        let d4 = RootDatum::new(CartanType::D, 4).unwrap();
        assert!(d4.is_cominuscule(1).unwrap());
        assert!(b3.is_braidless(3).unwrap());
        assert!(!b3.is_cominuscule(3).unwrap());
    }

    #[test]
    fn long_words() {
        let a3 = RootDatum::new(CartanType::A, 3).unwrap();
        let w0 = a3.long_word(None);
        assert_eq!(w0.len(), 6);
        assert!(a3.is_reduced(&w0.indices));
        let wm = a3.long_word(Some(&[1, 3]));
        assert_eq!(wm.len(), 2);
        assert!(wm.indices.iter().all(|i| [1, 3].contains(i)));
        let a1 = RootDatum::new(CartanType::A, 1).unwrap();
        assert_eq!(a1.long_word(None).indices, vec![1]);
    }

    #[test]
    fn reduced_word_letter_dropping() {
        let a3 = RootDatum::new(CartanType::A, 3).unwrap();
        let w0 = a3.long_word(None).indices;
        for drop in 0..w0.len() {
            let shorter: Vec<usize> = w0
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &l)| l)
                .collect();
            let differs = a3
                .positive_roots
                .iter()
                .any(|r| a3.apply_word(&w0, r) != a3.apply_word(&shorter, r));
            assert!(differs, "dropping letter {drop} left the action unchanged");
        }
    }

    #[test]
    fn gl4_parabolic_matches_the_worked_example() {
        let a3 = RootDatum::new(CartanType::A, 3).unwrap();
        let pd = ParabolicData::build(a3, 2, &CorootForm::constant(3, 1)).unwrap();
        assert!(pd.cominuscule);
        assert_eq!(pd.word_p.indices, vec![2, 1, 3, 2]);
        assert_eq!(
            pd.gammas,
            vec![
                root(&[1, 1, 1]),
                root(&[0, 1, 1]),
                root(&[1, 1, 0]),
                root(&[0, 1, 0]),
            ]
        );
        // commutation pairs found by exhaustive scan
        let s1: Vec<(usize, usize)> = pd.commutation_pairs[&1]
            .iter()
            .map(|p| (p.k, p.kp))
            .collect();
        let s3: Vec<(usize, usize)> = pd.commutation_pairs[&3]
            .iter()
            .map(|p| (p.k, p.kp))
            .collect();
        assert_eq!(s1, vec![(2, 1), (4, 3)]);
        assert_eq!(s3, vec![(3, 1), (4, 2)]);
        // moduli: c_1 mod p^{l1+l2+l3}, c_2 mod p^{l2+l4}, c_3 mod p^{l3+l4}, c_4 mod p^{l4}
        let ell = [5u32, 7, 11, 13];
        assert_eq!(pd.modulus_exponent(&ell, 1).unwrap(), 5 + 7 + 11);
        assert_eq!(pd.modulus_exponent(&ell, 2).unwrap(), 7 + 13);
        assert_eq!(pd.modulus_exponent(&ell, 3).unwrap(), 11 + 13);
        assert_eq!(pd.modulus_exponent(&ell, 4).unwrap(), 13);
        assert_eq!(pd.modulus_exponent(&[0; 4], 1).unwrap(), 0);
        // denominators of the four psi-terms
        assert_eq!(pd.denominator_exponent(&ell, (2, 1), 1).unwrap(), 5 + 11 - 13);
        assert_eq!(pd.denominator_exponent(&ell, (4, 3), 1).unwrap(), 11);
        assert_eq!(pd.denominator_exponent(&ell, (3, 1), 3).unwrap(), 5 + 7 - 13);
        assert_eq!(pd.denominator_exponent(&ell, (4, 2), 3).unwrap(), 7);
        assert_eq!(pd.denominator_exponent(&[0; 4], (4, 2), 3).unwrap(), 0);
        assert!(pd.denominator_exponent(&ell, (3, 2), 1).is_err());
    }

    #[test]
    fn a2_node1_parabolic() {
        let a2 = RootDatum::new(CartanType::A, 2).unwrap();
        let pd = ParabolicData::build(a2, 1, &CorootForm::constant(2, 1)).unwrap();
        assert_eq!(pd.n(), 2);
        assert_eq!(pd.gammas, vec![root(&[1, 1]), root(&[1, 0])]);
    }

    #[test]
    fn non_braidless_node_rejected() {
        let b3 = RootDatum::new(CartanType::B, 3).unwrap();
        assert!(matches!(
            ParabolicData::build(b3, 2, &CorootForm::constant(3, 1)),
            Err(Error::NotBraidless(2))
        ));
    }

    #[test]
    fn denominator_identity_matches_modulus_quotient() {
        // Lemma-level identity: ord D(k,k'; alpha_j) = ord D_{k'} - ord D_k,
        // exhaustively for small ell on two parabolics
        for (t, r, node) in [(CartanType::A, 3, 2), (CartanType::D, 4, 1)] {
            let d = RootDatum::new(t, r).unwrap();
            let pd = ParabolicData::build(d, node, &CorootForm::constant(r, 1)).unwrap();
            let n = pd.n();
            let mut ell = vec![0u32; n];
            'sweep: loop {
                for (&j, pairs) in &pd.commutation_pairs {
                    for p in pairs {
                        let lhs = pd.denominator_exponent(&ell, (p.k, p.kp), j).unwrap();
                        let rhs = p.ip * pd.modulus_exponent(&ell, p.kp).unwrap()
                            - p.i * pd.modulus_exponent(&ell, p.k).unwrap();
                        assert_eq!(lhs, rhs, "ell={ell:?} pair=({},{}) j={j}", p.k, p.kp);
                    }
                }
                let mut pos = 0;
                loop {
                    if pos == n {
                        break 'sweep;
                    }
                    if ell[pos] < 3 {
                        ell[pos] += 1;
                        break;
                    }
                    ell[pos] = 0;
                    pos += 1;
                }
            }
        }
    }

    #[test]
    fn pairing_nonnegativity_on_cominuscule_catalog() {
        for (d, node) in cominuscule_catalog(5) {
            let r = d.rank;
            let pd = ParabolicData::build(d, node, &CorootForm::constant(r, 1)).unwrap();
            for row in &pd.pairing {
                for &x in row {
                    assert!(
                        x >= 0,
                        "negative pairing in {:?} node {}",
                        pd.datum.cartan_type,
                        node
                    );
                }
            }
            for pairs in pd.commutation_pairs.values() {
                for p in pairs {
                    assert_eq!((p.i, p.ip), (1, 1));
                }
            }
        }
    }
}
