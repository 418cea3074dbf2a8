//! Feasible sets given as convex hulls of indexed atom families, and points
//! carried together with an explicit convex-combination weight vector.
//!
//! Atom indices are zero-based throughout the crate.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Weights below this are dropped from the support after an update.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Relative feasibility slack accepted by [`AtomicDomain::weights_of`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Above this many atoms the explicit-atom diameter falls back to a centroid bound.
const PAIRWISE_DIAMETER_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum AtomSet {
    /// `{x >= 0 | <a, x> = tau}`; atom `i` is `(tau / a_i) e^i`.
    ScaledSimplex { a: Vec<f64>, tau: f64 },
    /// An explicit list of atoms, not necessarily affinely independent.
    Explicit { atoms: Vec<Vec<f64>> },
}

/// A polytope described as the convex hull of `n` atoms in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDomain {
    dim: usize,
    atoms: AtomSet,
}

/// An atom index together with the linear functional's value on that atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomChoice {
    pub index: usize,
    pub value: f64,
}

/// Upper bound `B` on the distance between any two atoms.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DiameterBound(pub f64);

impl DiameterBound {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl AtomicDomain {
    /// The standard simplex scaled to `sum x = tau`.
    pub fn simplex(dim: usize, tau: f64) -> Result<Self> {
        Self::scaled_simplex(vec![1.0; dim], tau)
    }

    pub fn scaled_simplex(a: Vec<f64>, tau: f64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain("scaled simplex needs at least one coordinate".into()));
        }
        if let Some((i, v)) = a.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!("coefficient a[{i}] = {v} must be positive")));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("tau = {tau} must be positive")));
        }
        Ok(Self {
            dim: a.len(),
            atoms: AtomSet::ScaledSimplex { a, tau },
        })
    }

    pub fn explicit(atoms: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match atoms.first() {
            Some(first) if !first.is_empty() => first.len(),
            Some(_) => return Err(Error::Domain("atoms must have at least one coordinate".into())),
            None => return Err(Error::Domain("atom list is empty".into())),
        };
        for (i, atom) in atoms.iter().enumerate() {
            if atom.len() != dim {
                return Err(Error::Domain(format!(
                    "atom {i} has {} coordinates, expected {dim}",
                    atom.len()
                )));
            }
            if atom.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain(format!("atom {i} has a non-finite coordinate")));
            }
        }
        Ok(Self {
            dim,
            atoms: AtomSet::Explicit { atoms },
        })
    }

    /// Loads one atom per row. A leading row that does not parse as numbers is
    /// taken as a header.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
        Self::from_csv_reader(file, &path.display().to_string())
    }

    pub fn from_csv_reader<R: Read>(reader: R, label: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let parse_err = |row: usize, column: usize, message: String| Error::AtomParse {
            path: label.to_string(),
            row,
            column,
            message,
        };
        let mut atoms: Vec<Vec<f64>> = Vec::new();
        let mut width: Option<usize> = None;
        for (r, record) in rdr.records().enumerate() {
            let row = r + 1;
            let record = record.map_err(|e| parse_err(row, 0, e.to_string()))?;
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            let parsed: Vec<std::result::Result<f64, _>> =
                record.iter().map(|f| f.parse::<f64>()).collect();
            if row == 1 && parsed.iter().any(|p| p.is_err()) {
                width = Some(record.len());
                continue;
            }
            let mut atom = Vec::with_capacity(parsed.len());
            for (c, (p, raw)) in parsed.into_iter().zip(record.iter()).enumerate() {
                match p {
                    Ok(v) if v.is_finite() => atom.push(v),
                    _ => return Err(parse_err(row, c + 1, format!("not a finite number: {raw:?}"))),
                }
            }
            match width {
                Some(w) if w != atom.len() => {
                    return Err(parse_err(
                        row,
                        atom.len().min(w) + 1,
                        format!("expected {w} columns, found {}", atom.len()),
                    ))
                }
                _ => width = Some(atom.len()),
            }
            atoms.push(atom);
        }
        if atoms.is_empty() {
            return Err(Error::Domain(format!("{label}: no atoms found")));
        }
        Self::explicit(atoms)
    }

    /// Number of atoms `n`.
    pub fn n(&self) -> usize {
        match &self.atoms {
            AtomSet::ScaledSimplex { a, .. } => a.len(),
            AtomSet::Explicit { atoms } => atoms.len(),
        }
    }

    /// Ambient dimension `m`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom_set(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn is_scaled_simplex(&self) -> bool {
        matches!(self.atoms, AtomSet::ScaledSimplex { .. })
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::Domain(format!("atom index {i} out of range (n = {})", self.n())))
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, got: len })
        }
    }

    /// Dense coordinates of atom `i`.
    pub fn atom(&self, i: usize) -> Result<Vec<f64>> {
        self.check_index(i)?;
        Ok(match &self.atoms {
            AtomSet::ScaledSimplex { a, tau } => {
                let mut z = vec![0.0; self.dim];
                z[i] = tau / a[i];
                z
            }
            AtomSet::Explicit { atoms } => atoms[i].clone(),
        })
    }

    /// `<g, z^i>` without materializing the atom. Panics on a bad index.
    pub fn atom_value(&self, i: usize, g: &[f64]) -> f64 {
        match &self.atoms {
            AtomSet::ScaledSimplex { a, tau } => tau * g[i] / a[i],
            AtomSet::Explicit { atoms } => dot(&atoms[i], g),
        }
    }

    /// Linear minimization oracle: the atom minimizing `<g, z>`, lowest index on ties.
    pub fn lmo(&self, g: &[f64]) -> Result<AtomChoice> {
        self.check_dim(g.len())?;
        let mut best = AtomChoice {
            index: 0,
            value: self.atom_value(0, g),
        };
        for i in 1..self.n() {
            let v = self.atom_value(i, g);
            if v < best.value {
                best = AtomChoice { index: i, value: v };
            }
        }
        Ok(best)
    }

    /// Away oracle: the atom maximizing `<g, z>` over supported atoms whose weight
    /// is at least `eps` (all supported atoms when `eps == 0`). `None` when no
    /// supported weight meets the threshold.
    pub fn away_index(&self, g: &[f64], wp: &WeightedPoint, eps: f64) -> Option<AtomChoice> {
        let mut best: Option<AtomChoice> = None;
        for (&i, &u) in wp.weights() {
            let admissible = if eps > 0.0 { u >= eps } else { u > 0.0 };
            if !admissible {
                continue;
            }
            let v = self.atom_value(i, g);
            // support iterates in increasing index order, so strict > keeps the lowest index
            if best.is_none_or(|b| v > b.value) {
                best = Some(AtomChoice { index: i, value: v });
            }
        }
        best
    }

    /// Recovers the (unique) weights of a point of a scaled simplex: `u_s = a_s x_s / tau`.
    pub fn weights_of(&self, x: &[f64]) -> Result<WeightedPoint> {
        self.check_dim(x.len())?;
        let AtomSet::ScaledSimplex { a, tau } = &self.atoms else {
            return Err(Error::Domain(
                "weights are not recoverable from coordinates for explicit atom sets".into(),
            ));
        };
        if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::Domain(format!("x[{i}] = {v} is negative")));
        }
        let ax = dot(a, x);
        if (ax - tau).abs() > FEASIBILITY_TOL * tau {
            return Err(Error::Domain(format!("<a, x> = {ax} differs from tau = {tau}")));
        }
        let weights: BTreeMap<usize, f64> = x
            .iter()
            .zip(a)
            .enumerate()
            .filter(|(_, (xs, _))| **xs > 0.0)
            .map(|(s, (xs, as_))| (s, as_ * xs / tau))
            .collect();
        let mut wp = WeightedPoint {
            weights,
            point: x.to_vec(),
        };
        wp.renormalize(self);
        Ok(wp)
    }

    /// `sum_i u_i z^i`.
    pub fn reconstruct(&self, weights: &BTreeMap<usize, f64>) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for (&i, &u) in weights {
            self.add_scaled_atom(i, u, &mut x);
        }
        x
    }

    /// `out += scale * z^i`.
    pub fn add_scaled_atom(&self, i: usize, scale: f64, out: &mut [f64]) {
        match &self.atoms {
            AtomSet::ScaledSimplex { a, tau } => out[i] += scale * tau / a[i],
            AtomSet::Explicit { atoms } => {
                for (o, z) in out.iter_mut().zip(&atoms[i]) {
                    *o += scale * z;
                }
            }
        }
    }

    pub fn diameter(&self) -> DiameterBound {
        match &self.atoms {
            AtomSet::ScaledSimplex { a, tau } => {
                if a.len() == 1 {
                    return DiameterBound(0.0);
                }
                // the two longest legs give the largest pair distance
                let mut top = [0.0f64; 2];
                for ai in a {
                    let len = tau / ai;
                    if len > top[0] {
                        top[1] = top[0];
                        top[0] = len;
                    } else if len > top[1] {
                        top[1] = len;
                    }
                }
                DiameterBound(top[0].hypot(top[1]))
            }
            AtomSet::Explicit { atoms } => {
                if atoms.len() <= PAIRWISE_DIAMETER_LIMIT {
                    let mut best = 0.0f64;
                    for i in 0..atoms.len() {
                        for j in i + 1..atoms.len() {
                            best = best.max(dist(&atoms[i], &atoms[j]));
                        }
                    }
                    DiameterBound(best)
                } else {
                    let mut c = vec![0.0; self.dim];
                    for z in atoms {
                        for (ck, zk) in c.iter_mut().zip(z) {
                            *ck += zk;
                        }
                    }
                    c.iter_mut().for_each(|ck| *ck /= atoms.len() as f64);
                    let radius = atoms.iter().map(|z| dist(z, &c)).fold(0.0, f64::max);
                    DiameterBound(2.0 * radius)
                }
            }
        }
    }
}

/// A feasible point stored as a sparse convex combination of atoms, with its
/// coordinates cached.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoint {
    weights: BTreeMap<usize, f64>,
    point: Vec<f64>,
}

impl WeightedPoint {
    /// The atom `z^i` itself.
    pub fn vertex(domain: &AtomicDomain, i: usize) -> Result<Self> {
        Ok(Self {
            point: domain.atom(i)?,
            weights: BTreeMap::from([(i, 1.0)]),
        })
    }

    /// Equal weights on every atom (the barycenter).
    pub fn barycenter(domain: &AtomicDomain) -> Self {
        let n = domain.n();
        let weights: BTreeMap<usize, f64> = (0..n).map(|i| (i, 1.0 / n as f64)).collect();
        Self {
            point: domain.reconstruct(&weights),
            weights,
        }
    }

    /// Builds a point from explicit weights; they must be nonnegative and sum to one.
    pub fn from_weights(
        domain: &AtomicDomain,
        weights: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, u) in weights {
            domain.check_index(i)?;
            if !(u >= 0.0) || !u.is_finite() {
                return Err(Error::Domain(format!("weight {u} for atom {i} is not a valid weight")));
            }
            if u > 0.0 {
                *map.entry(i).or_insert(0.0) += u;
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > FEASIBILITY_TOL {
            return Err(Error::Domain(format!("weights sum to {total}, expected 1")));
        }
        let mut wp = Self {
            point: Vec::new(),
            weights: map,
        };
        wp.renormalize(domain);
        wp.point = domain.reconstruct(&wp.weights);
        Ok(wp)
    }

    pub fn weights(&self) -> &BTreeMap<usize, f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights.get(&i).copied().unwrap_or(0.0)
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    /// Supported atoms `I_+`, in increasing index order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Coordinates of `x + amount (z^to - z^from)`, computed exactly as
    /// [`WeightedPoint::transfer`] would store them.
    pub fn trial_transfer(
        &self,
        domain: &AtomicDomain,
        from: usize,
        to: usize,
        amount: f64,
        out: &mut Vec<f64>,
    ) {
        out.clear();
        out.extend_from_slice(&self.point);
        match domain.atom_set() {
            AtomSet::ScaledSimplex { a, tau } => {
                out[from] = scaled_coordinate(self.weight(from) - amount, a[from], *tau);
                out[to] = scaled_coordinate(self.weight(to) + amount, a[to], *tau);
            }
            AtomSet::Explicit { atoms } => {
                for ((o, zt), zf) in out.iter_mut().zip(&atoms[to]).zip(&atoms[from]) {
                    *o += amount * (zt - zf);
                }
            }
        }
    }

    /// Moves `amount` of weight from atom `from` to atom `to`.
    pub fn transfer(&mut self, domain: &AtomicDomain, from: usize, to: usize, amount: f64) {
        debug_assert!(from != to);
        let mut next = Vec::with_capacity(self.point.len());
        self.trial_transfer(domain, from, to, amount, &mut next);
        self.point = next;
        let uf = self.weight(from) - amount;
        let ut = self.weight(to) + amount;
        self.set_weight(from, uf);
        self.set_weight(to, ut);
        if uf < PRUNE_THRESHOLD {
            if let AtomSet::ScaledSimplex { .. } = domain.atom_set() {
                self.point[from] = 0.0;
            }
        }
        self.renormalize(domain);
    }

    /// Coordinates of `(1 - step) x + step z^to`.
    pub fn trial_blend(&self, domain: &AtomicDomain, to: usize, step: f64, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.point.iter().map(|x| (1.0 - step) * x));
        domain.add_scaled_atom(to, step, out);
    }

    /// Conditional-gradient update `u <- (1 - step) u + step e_to`.
    pub fn blend(&mut self, domain: &AtomicDomain, to: usize, step: f64) {
        let mut next = Vec::with_capacity(self.point.len());
        self.trial_blend(domain, to, step, &mut next);
        self.point = next;
        for u in self.weights.values_mut() {
            *u *= 1.0 - step;
        }
        *self.weights.entry(to).or_insert(0.0) += step;
        let pruned: Vec<usize> = self
            .weights
            .iter()
            .filter(|(_, &u)| u < PRUNE_THRESHOLD)
            .map(|(&i, _)| i)
            .collect();
        for i in pruned {
            self.weights.remove(&i);
        }
        self.renormalize(domain);
    }

    fn set_weight(&mut self, i: usize, u: f64) {
        if u < PRUNE_THRESHOLD {
            self.weights.remove(&i);
        } else {
            self.weights.insert(i, u);
        }
    }

    /// Rescales weights to sum exactly to one when rounding has drifted, and
    /// refreshes the cached point from them.
    fn renormalize(&mut self, domain: &AtomicDomain) {
        let total: f64 = self.weights.values().sum();
        if (total - 1.0).abs() > 1e-14 {
            for u in self.weights.values_mut() {
                *u /= total;
            }
            self.point = domain.reconstruct(&self.weights);
        }
    }

    /// `(|sum u - 1|, min u, ||point - sum u z||_inf)`.
    pub fn integrity(&self, domain: &AtomicDomain) -> (f64, f64, f64) {
        let total: f64 = self.weights.values().sum();
        let min = self.weights.values().copied().fold(f64::INFINITY, f64::min);
        let rebuilt = domain.reconstruct(&self.weights);
        let err = rebuilt
            .iter()
            .zip(&self.point)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ((total - 1.0).abs(), min, err)
    }
}

fn scaled_coordinate(u: f64, a: f64, tau: f64) -> f64 {
    if u < PRUNE_THRESHOLD {
        0.0
    } else {
        u * tau / a
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn atom_coordinates() {
        let d = AtomicDomain::simplex(3, 10.0).unwrap();
        assert_eq!(d.atom(1).unwrap(), vec![0.0, 10.0, 0.0]);
        let d = AtomicDomain::scaled_simplex(vec![2.0, 1.0], 10.0).unwrap();
        assert_eq!(d.atom(0).unwrap(), vec![5.0, 0.0]);
        let d = AtomicDomain::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(d.atom(2).unwrap(), vec![1.0, 1.0]);
        assert!(matches!(d.atom(3), Err(Error::Domain(_))));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(AtomicDomain::scaled_simplex(vec![1.0, 0.0], 1.0).is_err());
        assert!(AtomicDomain::scaled_simplex(vec![1.0], -1.0).is_err());
        assert!(AtomicDomain::explicit(vec![]).is_err());
        assert!(AtomicDomain::explicit(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn lmo_picks_minimum_with_lowest_index_ties() {
        let d = AtomicDomain::simplex(3, 1.0).unwrap();
        assert_eq!(d.lmo(&[3.0, 1.0, 2.0]).unwrap(), AtomChoice { index: 1, value: 1.0 });

        // tau g_i / a_i = (2, 1)
        let d = AtomicDomain::scaled_simplex(vec![1.0, 2.0], 2.0).unwrap();
        assert_eq!(d.lmo(&[1.0, 1.0]).unwrap(), AtomChoice { index: 1, value: 1.0 });

        let d = AtomicDomain::explicit(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(d.lmo(&[-1.0, -1.0]).unwrap(), AtomChoice { index: 1, value: -1.0 });

        assert!(matches!(d.lmo(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn away_index_respects_threshold() {
        let d = AtomicDomain::simplex(3, 1.0).unwrap();
        let third = 1.0 / 3.0;
        let wp = WeightedPoint::from_weights(&d, [(0, third), (1, third), (2, third)]).unwrap();
        assert_eq!(
            d.away_index(&[3.0, 1.0, 2.0], &wp, 0.1),
            Some(AtomChoice { index: 0, value: 3.0 })
        );

        let wp = WeightedPoint::from_weights(&d, [(0, 0.9), (1, 0.05), (2, 0.05)]).unwrap();
        assert_eq!(d.away_index(&[0.0, 5.0, 7.0], &wp, 0.1).map(|c| c.index), Some(0));

        let wp = WeightedPoint::from_weights(&d, [(0, 0.05), (1, 0.05), (2, 0.9)]).unwrap();
        assert_eq!(d.away_index(&[1.0, 2.0, 3.0], &wp, 0.95), None);
        // eps = 0 searches the whole support
        assert_eq!(d.away_index(&[1.0, 2.0, 0.0], &wp, 0.0).map(|c| c.index), Some(1));
    }

    #[test]
    fn weights_of_simplex_points() {
        let d = AtomicDomain::simplex(3, 10.0).unwrap();
        let wp = d.weights_of(&[10.0, 0.0, 0.0]).unwrap();
        assert_eq!(wp.weights(), &BTreeMap::from([(0, 1.0)]));

        let d = AtomicDomain::simplex(5, 10.0).unwrap();
        let wp = d.weights_of(&[2.0; 5]).unwrap();
        assert!(wp.weights().values().all(|u| (u - 0.2).abs() < 1e-15));

        let d = AtomicDomain::scaled_simplex(vec![2.0, 1.0], 10.0).unwrap();
        let wp = d.weights_of(&[2.5, 5.0]).unwrap();
        assert!((wp.weight(0) - 0.5).abs() < 1e-15 && (wp.weight(1) - 0.5).abs() < 1e-15);
        assert!(close(&d.reconstruct(wp.weights()), &[2.5, 5.0], 1e-12));
    }

    #[test]
    fn weights_of_rejects_infeasible() {
        let d = AtomicDomain::simplex(2, 1.0).unwrap();
        assert!(d.weights_of(&[-0.1, 1.1]).is_err());
        assert!(d.weights_of(&[0.5, 0.6]).is_err());
        assert!(d.weights_of(&[0.5]).is_err());
        let e = AtomicDomain::explicit(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(e.weights_of(&[0.5]).is_err());
    }

    #[test]
    fn reconstruct_examples() {
        let d = AtomicDomain::simplex(4, 10.0).unwrap();
        assert_eq!(d.reconstruct(&BTreeMap::from([(0, 1.0)])), vec![10.0, 0.0, 0.0, 0.0]);
        let e = AtomicDomain::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(e.reconstruct(&BTreeMap::from([(0, 0.5), (1, 0.5)])), vec![0.5, 0.5]);
        let s = AtomicDomain::scaled_simplex(vec![1.0, 1.0, 2.0], 2.0).unwrap();
        assert!(close(
            &s.reconstruct(&BTreeMap::from([(0, 0.3), (2, 0.7)])),
            &[0.6, 0.0, 0.7],
            1e-15
        ));
    }

    #[test]
    fn diameter_bounds() {
        let d = AtomicDomain::scaled_simplex(vec![1.0, 2.0, 4.0], 4.0).unwrap();
        // legs 4, 2, 1
        assert!((d.diameter().value() - (16.0f64 + 4.0).sqrt()).abs() < 1e-12);
        assert_eq!(AtomicDomain::simplex(1, 3.0).unwrap().diameter().value(), 0.0);
        let e = AtomicDomain::explicit(vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        assert!((e.diameter().value() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn transfer_moves_weight_and_point() {
        let d = AtomicDomain::simplex(3, 1.0).unwrap();
        let mut wp = WeightedPoint::vertex(&d, 0).unwrap();
        wp.transfer(&d, 0, 2, 0.25);
        assert!(close(wp.point(), &[0.75, 0.0, 0.25], 1e-15));
        wp.transfer(&d, 0, 1, 0.75);
        assert_eq!(wp.support().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(wp.point()[0], 0.0);
        let (sum_err, min_u, recon) = wp.integrity(&d);
        assert!(sum_err < 1e-15 && min_u > 0.0 && recon < 1e-15);
    }

    #[test]
    fn blend_matches_trial() {
        let d = AtomicDomain::explicit(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let mut wp = WeightedPoint::vertex(&d, 0).unwrap();
        let mut trial = Vec::new();
        wp.trial_blend(&d, 1, 0.5, &mut trial);
        wp.blend(&d, 1, 0.5);
        assert_eq!(wp.point(), trial.as_slice());
        assert!(close(wp.point(), &[1.0, 0.0], 1e-15));
        wp.blend(&d, 1, 1.0);
        assert_eq!(wp.support().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn csv_atoms_with_header_and_errors() {
        let text = "x,y\n1,0\n0,1\n1,1\n";
        let d = AtomicDomain::from_csv_reader(text.as_bytes(), "atoms.csv").unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.atom(2).unwrap(), vec![1.0, 1.0]);

        let d = AtomicDomain::from_csv_reader("1,2,3\n4,5,6\n".as_bytes(), "a").unwrap();
        assert_eq!((d.n(), d.dim()), (2, 3));

        match AtomicDomain::from_csv_reader("1,2\n3,oops\n".as_bytes(), "a") {
            Err(Error::AtomParse { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        match AtomicDomain::from_csv_reader("1,2\n3\n".as_bytes(), "a") {
            Err(Error::AtomParse { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
