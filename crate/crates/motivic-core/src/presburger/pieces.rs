//! Decomposition of quantifier-free Presburger sets into disjoint
//! lattice-cone pieces.
//!
//! Pipeline per disjoint conjunction of atoms:
//!  1. equalities are solved over Z (Smith form), reducing the dimension;
//!  2. congruences are absorbed into a sublattice coset (Hermite form);
//!  3. the remaining inequality system is split along its lineality space,
//!     then each pointed polyhedron is triangulated (pulling triangulation
//!     of the homogenization), the cells are made half-open against a
//!     generic point, and the integer points of each half-open truncated
//!     prism become piece apexes with the cell rays as generators.
//!
//! Every piece is an exactly parametrized affine semigroup
//! `apex + N g_1 + ... + N g_s` with linearly independent generators, and
//! distinct pieces are pairwise disjoint.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::linalg::{
    hnf_basis, primitive_int_vector, rat_kernel, rat_rank, rat_solve,
    solve_integer_system,
};
use crate::{Int, Rat};

use super::qf::{LinTerm, QAtom, Qf};
use super::{LinearPiece, PresburgerError};

/// Guard on prism enumeration boxes.
const MAX_BOX_POINTS: u64 = 4_000_000;

type Conj = Vec<QAtom>;

/// Replace `Ne` and `NotDiv` atoms by disjoint positive disjunctions.
fn expand_nonconvex(phi: &Qf) -> Qf {
    match phi {
        Qf::Top | Qf::Bot => phi.clone(),
        Qf::And(fs) => Qf::And(fs.iter().map(expand_nonconvex).collect()),
        Qf::Or(fs) => Qf::Or(fs.iter().map(expand_nonconvex).collect()),
        Qf::Atom(a) => match a {
            QAtom::Ne(t) => Qf::Or(vec![
                Qf::Atom(QAtom::Le(t.add_const(&Int::one()))),
                Qf::Atom(QAtom::Le(t.neg().add_const(&Int::one()))),
            ]),
            QAtom::NotDiv(m, t) => {
                let mu: u64 = m.try_into().expect("modulus fits u64");
                Qf::Or(
                    (1..mu)
                        .map(|rho| {
                            Qf::Atom(QAtom::Div(
                                m.clone(),
                                t.add_const(&-Int::from(rho)),
                            ))
                        })
                        .collect(),
                )
            }
            other => Qf::Atom(other.clone()),
        },
    }
}

fn to_dnf(phi: &Qf) -> Vec<Conj> {
    match phi {
        Qf::Top => vec![Vec::new()],
        Qf::Bot => Vec::new(),
        Qf::Atom(a) => vec![vec![a.clone()]],
        Qf::Or(fs) => {
            let mut out = Vec::new();
            for f in fs {
                out.extend(to_dnf(f));
            }
            out
        }
        Qf::And(fs) => {
            let mut acc: Vec<Conj> = vec![Vec::new()];
            for f in fs {
                let parts = to_dnf(f);
                let mut next = Vec::new();
                for base in &acc {
                    for p in &parts {
                        let mut c = base.clone();
                        c.extend(p.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

fn normalize_conj(mut c: Conj) -> Option<Conj> {
    let mut out = Vec::new();
    for a in c.drain(..) {
        let a = a.normalize();
        match a.ground_value() {
            Some(true) => {}
            Some(false) => return None,
            None => out.push(a),
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Disjoint positive cases of the complement of a single atom.
fn negate_atom_cases(a: &QAtom) -> Vec<QAtom> {
    match a {
        QAtom::Le(t) => vec![QAtom::Le(t.neg().add_const(&Int::one()))],
        QAtom::Eq(t) => vec![
            QAtom::Le(t.add_const(&Int::one())),
            QAtom::Le(t.neg().add_const(&Int::one())),
        ],
        QAtom::Div(m, t) => {
            let mu: u64 = m.clone().try_into().expect("modulus fits u64");
            (1..mu)
                .map(|rho| QAtom::Div(m.clone(), t.add_const(&-Int::from(rho))))
                .collect()
        }
        QAtom::Ne(_) | QAtom::NotDiv(_, _) => unreachable!("expanded earlier"),
    }
}

/// `part` minus the solution set of `blocker`, as disjoint conjunctions.
fn subtract_conj(part: &Conj, blocker: &Conj) -> Vec<Conj> {
    let mut out = Vec::new();
    for k in 0..blocker.len() {
        for neg in negate_atom_cases(&blocker[k]) {
            let mut c = part.clone();
            c.extend(blocker[..k].iter().cloned());
            c.push(neg);
            if let Some(c) = normalize_conj(c) {
                out.push(c);
            }
        }
    }
    out
}

/// Make the DNF cases pairwise disjoint: case i keeps `C_i` minus all
/// earlier cases, in lexicographic case order.
fn disjointify(conjs: Vec<Conj>) -> Vec<Conj> {
    let mut sorted = conjs;
    sorted.sort();
    sorted.dedup();
    let mut out: Vec<Conj> = Vec::new();
    for (i, c) in sorted.iter().enumerate() {
        let mut parts = match normalize_conj(c.clone()) {
            Some(p) => vec![p],
            None => continue,
        };
        for earlier in &sorted[..i] {
            let mut next = Vec::new();
            for p in &parts {
                next.extend(subtract_conj(p, earlier));
            }
            parts = next;
            if parts.is_empty() {
                break;
            }
        }
        out.extend(parts);
    }
    out
}

/// Affine parametrization `x = origin + sum coords[i] * basis[i]`.
#[derive(Clone, Debug)]
struct Chart {
    origin: Vec<Int>,
    basis: Vec<Vec<Int>>,
}

impl Chart {
    fn identity(dim: usize) -> Self {
        Chart {
            origin: vec![Int::zero(); dim],
            basis: (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| if i == j { Int::one() } else { Int::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply_point(&self, coords: &[Int]) -> Vec<Int> {
        let mut out = self.origin.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, bv) in out.iter_mut().zip(b) {
                *o += c * bv;
            }
        }
        out
    }

    fn apply_vector(&self, coords: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.origin.len()];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, bv) in out.iter_mut().zip(b) {
                *o += c * bv;
            }
        }
        out
    }

    /// Rewrite `a . x + c <= 0` in chart coordinates.
    fn pull_ineq(&self, coeffs: &[Int], constant: &Int) -> (Vec<Int>, Int) {
        let mut c2 = constant.clone();
        for (a, o) in coeffs.iter().zip(&self.origin) {
            c2 += a * o;
        }
        let a2: Vec<Int> = self
            .basis
            .iter()
            .map(|b| {
                coeffs
                    .iter()
                    .zip(b)
                    .map(|(a, bv)| a * bv)
                    .fold(Int::zero(), |acc, t| acc + t)
            })
            .collect();
        (a2, c2)
    }
}

/// Decompose a quantifier-free internal formula over `arity` columns.
pub(crate) fn qf_to_pieces(qf: &Qf, arity: usize) -> Result<Vec<LinearPiece>, PresburgerError> {
    let expanded = expand_nonconvex(&qf.clone().simplify()).simplify();
    let conjs = disjointify(to_dnf(&expanded));
    let mut pieces = Vec::new();
    for conj in conjs {
        pieces.extend(decompose_conj(&conj, arity)?);
    }
    pieces.sort();
    Ok(pieces)
}

fn decompose_conj(conj: &Conj, arity: usize) -> Result<Vec<LinearPiece>, PresburgerError> {
    let mut eqs: Vec<&LinTerm> = Vec::new();
    let mut congs: Vec<(&Int, &LinTerm)> = Vec::new();
    let mut ineqs: Vec<&LinTerm> = Vec::new();
    for a in conj {
        match a {
            QAtom::Eq(t) => eqs.push(t),
            QAtom::Div(m, t) => congs.push((m, t)),
            QAtom::Le(t) => ineqs.push(t),
            QAtom::Ne(_) | QAtom::NotDiv(..) => unreachable!("expanded earlier"),
        }
    }

    // Stage 1: equalities.
    let chart1 = if eqs.is_empty() {
        Chart::identity(arity)
    } else {
        let rows: Vec<Vec<Int>> = eqs.iter().map(|t| t.coeffs.clone()).collect();
        let rhs: Vec<Int> = eqs.iter().map(|t| -t.constant.clone()).collect();
        match solve_integer_system(&rows, &rhs) {
            None => return Ok(Vec::new()),
            Some((x0, kernel)) => Chart { origin: x0, basis: kernel },
        }
    };

    // Congruences and inequalities in chart1 coordinates.
    let congs1: Vec<(Int, Vec<Int>, Int)> = congs
        .iter()
        .map(|(m, t)| {
            let (a, c) = chart1.pull_ineq(&t.coeffs, &t.constant);
            ((*m).clone(), a, c)
        })
        .collect();
    let ineqs1: Vec<(Vec<Int>, Int)> = ineqs
        .iter()
        .map(|t| chart1.pull_ineq(&t.coeffs, &t.constant))
        .collect();

    // Stage 2: congruences become a full-rank sublattice coset.
    let p = chart1.dim();
    let chart2 = if congs1.is_empty() {
        Chart::identity(p)
    } else {
        if p == 0 {
            // Fully determined point; check congruences directly.
            for (m, _, c) in &congs1 {
                if !c.mod_floor(m).is_zero() {
                    return Ok(Vec::new());
                }
            }
            Chart::identity(0)
        } else {
            // Solve a.z + m*y = -c over (z, y).
            let k = congs1.len();
            let mut rows = Vec::with_capacity(k);
            let mut rhs = Vec::with_capacity(k);
            for (idx, (m, a, c)) in congs1.iter().enumerate() {
                let mut row = a.clone();
                row.extend((0..k).map(|j| {
                    if j == idx {
                        m.clone()
                    } else {
                        Int::zero()
                    }
                }));
                rows.push(row);
                rhs.push(-c.clone());
            }
            match solve_integer_system(&rows, &rhs) {
                None => return Ok(Vec::new()),
                Some((w0, kernel)) => {
                    let z0: Vec<Int> = w0[..p].to_vec();
                    let zgens: Vec<Vec<Int>> =
                        kernel.iter().map(|v| v[..p].to_vec()).collect();
                    let basis = hnf_basis(&zgens);
                    debug_assert_eq!(basis.len(), p, "congruence lattice is full rank");
                    Chart { origin: z0, basis }
                }
            }
        }
    };

    let ineqs2: Vec<(Vec<Int>, Int)> = ineqs1
        .iter()
        .map(|(a, c)| chart2.pull_ineq(a, c))
        .collect();

    let dim = chart2.dim();
    if dim == 0 {
        for (_, c) in &ineqs2 {
            if c.is_positive() {
                return Ok(Vec::new());
            }
        }
        let apex = chart1.apply_point(&chart2.origin);
        return Ok(vec![LinearPiece::plain(apex, Vec::new())]);
    }

    // Stage 3: inequalities.
    let mut out = Vec::new();
    for (apex_u, gens_u) in decompose_inequalities(ineqs2, dim)? {
        let apex = chart1.apply_point(&chart2.apply_point(&apex_u));
        let gens: Vec<Vec<Int>> = gens_u
            .iter()
            .map(|g| chart1.apply_vector(&chart2.apply_vector(g)))
            .collect();
        out.push(LinearPiece::plain(apex, gens));
    }
    Ok(out)
}

/// Disjoint semigroup pieces of `{u in Z^dim : a.u + c <= 0 for all rows}`.
fn decompose_inequalities(
    rows: Vec<(Vec<Int>, Int)>,
    dim: usize,
) -> Result<Vec<(Vec<Int>, Vec<Vec<Int>>)>, PresburgerError> {
    // Split along the lineality space until the recession cone is pointed.
    let kernel = if rows.is_empty() {
        (0..dim)
            .map(|k| {
                (0..dim)
                    .map(|j| if j == k { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect()
    } else {
        let coeff_rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|(a, _)| a.iter().map(|v| Rat::from_integer(v.clone())).collect())
            .collect();
        rat_kernel(&coeff_rows)
    };
    if let Some(k0) = kernel.first() {
        let k = primitive_int_vector(k0);
        let mut lower = rows.clone();
        lower.push((k.iter().map(|v| -v).collect(), Int::zero())); // k.u >= 0
        let mut upper = rows;
        upper.push((k.clone(), Int::one())); // k.u <= -1
        let mut out = decompose_inequalities(lower, dim)?;
        out.extend(decompose_inequalities(upper, dim)?);
        return Ok(out);
    }
    pointed_pieces(&rows, dim)
}

fn rat_row(a: &[Int]) -> Vec<Rat> {
    a.iter().map(|v| Rat::from_integer(v.clone())).collect()
}

fn feasible(rows: &[(Vec<Int>, Int)], x: &[Rat]) -> bool {
    rows.iter().all(|(a, c)| {
        let mut acc = Rat::from_integer(c.clone());
        for (ai, xi) in a.iter().zip(x) {
            acc += Rat::from_integer(ai.clone()) * xi.clone();
        }
        !acc.is_positive()
    })
}

/// Enumerate k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn pointed_pieces(
    rows: &[(Vec<Int>, Int)],
    dim: usize,
) -> Result<Vec<(Vec<Int>, Vec<Vec<Int>>)>, PresburgerError> {
    // Vertices: feasible solutions of full-rank row subsets.
    let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for sub in subsets(rows.len(), dim) {
        let a: Vec<Vec<Rat>> = sub.iter().map(|&i| rat_row(&rows[i].0)).collect();
        if rat_rank(&a) < dim {
            continue;
        }
        let b: Vec<Rat> = sub
            .iter()
            .map(|&i| Rat::from_integer(-rows[i].1.clone()))
            .collect();
        if let Some(x) = rat_solve(&a, &b) {
            if feasible(rows, &x) {
                vertices.insert(x);
            }
        }
    }
    if vertices.is_empty() {
        return Ok(Vec::new()); // pointed and line-free, so empty
    }

    // Extreme rays of the recession cone: kernels of (dim-1)-subsets.
    let mut rays: BTreeSet<Vec<Int>> = BTreeSet::new();
    for sub in subsets(rows.len(), dim.saturating_sub(1)) {
        let a: Vec<Vec<Rat>> = sub.iter().map(|&i| rat_row(&rows[i].0)).collect();
        if !a.is_empty() && rat_rank(&a) < dim - 1 {
            continue;
        }
        let kern = if a.is_empty() {
            (0..dim)
                .map(|k| {
                    (0..dim)
                        .map(|j| if j == k { Rat::one() } else { Rat::zero() })
                        .collect::<Vec<Rat>>()
                })
                .collect()
        } else {
            rat_kernel(&a)
        };
        if kern.len() != 1 {
            continue;
        }
        let v = primitive_int_vector(&kern[0]);
        for w in [v.clone(), v.iter().map(|x| -x).collect::<Vec<Int>>()] {
            let ok = rows.iter().all(|(row, _)| {
                row.iter()
                    .zip(&w)
                    .map(|(a, b)| a * b)
                    .fold(Int::zero(), |acc, t| acc + t)
                    .is_negative()
                    || row
                        .iter()
                        .zip(&w)
                        .map(|(a, b)| a * b)
                        .fold(Int::zero(), |acc, t| acc + t)
                        .is_zero()
            });
            if ok {
                rays.insert(w);
            }
        }
    }

    // Homogenize at height 1.
    let mut gens: BTreeSet<Vec<Int>> = BTreeSet::new();
    for v in &vertices {
        let mut hom: Vec<Rat> = v.clone();
        hom.push(Rat::one());
        gens.insert(primitive_int_vector(&hom));
    }
    for r in &rays {
        let mut hom = r.clone();
        hom.push(Int::zero());
        gens.insert(hom);
    }
    let gens: Vec<Vec<Int>> = gens.into_iter().collect();

    let simplices = triangulate_cone(&gens);
    if simplices.is_empty() {
        return Ok(Vec::new());
    }

    // Generic reference point for the half-open decomposition: the interior
    // of the first cell, with lexicographic epsilon tie-breaking.
    let w0: Vec<Int> = (0..=dim)
        .map(|k| {
            simplices[0]
                .iter()
                .map(|&i| gens[i][k].clone())
                .fold(Int::zero(), |acc, t| acc + t)
        })
        .collect();

    let mut pieces = Vec::new();
    for simplex in &simplices {
        let cell: Vec<Vec<Int>> = simplex.iter().map(|&i| gens[i].clone()).collect();
        pieces.extend(prism_points(&cell, &w0, dim)?);
    }
    Ok(pieces)
}

/// Pulling triangulation of a pointed cone given by generators: cone over
/// the first generator and the triangulated facets not containing it.
fn triangulate_cone(gens: &[Vec<Int>]) -> Vec<Vec<usize>> {
    let rank = rat_rank(&gens.iter().map(|g| rat_row(g)).collect::<Vec<_>>());
    if rank == 0 {
        return Vec::new();
    }
    if gens.len() == rank {
        return vec![(0..gens.len()).collect()];
    }
    // Independent spanning subset for expressing normals inside the span.
    let mut span_basis: Vec<usize> = Vec::new();
    for i in 0..gens.len() {
        let mut trial: Vec<Vec<Rat>> = span_basis.iter().map(|&j| rat_row(&gens[j])).collect();
        trial.push(rat_row(&gens[i]));
        if rat_rank(&trial) > span_basis.len() {
            span_basis.push(i);
        }
    }

    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    for sub in subsets(gens.len(), rank - 1) {
        let sub_rows: Vec<Vec<Rat>> = sub.iter().map(|&i| rat_row(&gens[i])).collect();
        if rank >= 2 && rat_rank(&sub_rows) < rank - 1 {
            continue;
        }
        // Normal in span(gens), orthogonal to the subset.
        let cols = span_basis.len();
        let mut sys: Vec<Vec<Rat>> = Vec::new();
        for &i in &sub {
            sys.push(
                span_basis
                    .iter()
                    .map(|&j| dot_rat(&gens[j], &gens[i]))
                    .collect(),
            );
        }
        if sys.is_empty() {
            sys.push(vec![Rat::zero(); cols]);
        }
        let kern = rat_kernel(&sys);
        if kern.len() != 1 {
            continue;
        }
        let alpha = &kern[0];
        let mut normal = vec![Rat::zero(); gens[0].len()];
        for (a, &j) in alpha.iter().zip(&span_basis) {
            for (n, g) in normal.iter_mut().zip(&gens[j]) {
                *n += a.clone() * Rat::from_integer(g.clone());
            }
        }
        let mut n = primitive_int_vector(&normal);
        if n.iter().all(|v| v.is_zero()) {
            continue;
        }
        let dots: Vec<Int> = gens.iter().map(|g| dot_int(&n, g)).collect();
        let has_pos = dots.iter().any(|d| d.is_positive());
        let has_neg = dots.iter().any(|d| d.is_negative());
        if has_pos && has_neg {
            continue; // not a supporting hyperplane
        }
        if has_neg {
            n = n.iter().map(|v| -v).collect();
        }
        let dots: Vec<Int> = gens.iter().map(|g| dot_int(&n, g)).collect();
        if !dots[0].is_positive() {
            continue; // facet contains the pulled generator
        }
        let tight: Vec<usize> = (0..gens.len()).filter(|&i| dots[i].is_zero()).collect();
        if tight.is_empty() {
            continue;
        }
        let tight_rows: Vec<Vec<Rat>> = tight.iter().map(|&i| rat_row(&gens[i])).collect();
        if rat_rank(&tight_rows) != rank - 1 {
            continue;
        }
        let facet_gens: Vec<Vec<Int>> = tight.iter().map(|&i| gens[i].clone()).collect();
        for facet_simplex in triangulate_cone(&facet_gens) {
            let mut s: Vec<usize> = facet_simplex.iter().map(|&k| tight[k]).collect();
            s.push(0);
            s.sort();
            s.dedup();
            if s.len() == rank {
                simplices.insert(s);
            }
        }
    }
    simplices.into_iter().collect()
}

fn dot_rat(a: &[Int], b: &[Int]) -> Rat {
    Rat::from_integer(dot_int_full(a, b))
}

fn dot_int(a: &[Int], b: &[Int]) -> Int {
    dot_int_full(a, b)
}

fn dot_int_full(a: &[Int], b: &[Int]) -> Int {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Int::zero(), |acc, t| acc + t)
}

/// Integer points of the half-open truncated prism of a simplicial cell,
/// together with the cell rays; each point becomes a piece apex.
fn prism_points(
    cell: &[Vec<Int>],
    w0: &[Int],
    dim: usize,
) -> Result<Vec<(Vec<Int>, Vec<Vec<Int>>)>, PresburgerError> {
    let d_hat = cell.len();
    // Facet strictness: facet i (dropping generator i) is excluded when the
    // generic point lies strictly beyond it.
    let mut strict = vec![false; d_hat];
    for i in 0..d_hat {
        // Normal in span(cell): n = sum alpha_j b_j with n . b_k = 0, k != i.
        let mut sys: Vec<Vec<Rat>> = Vec::new();
        for k in 0..d_hat {
            if k == i {
                continue;
            }
            sys.push((0..d_hat).map(|j| dot_rat(&cell[j], &cell[k])).collect());
        }
        if sys.is_empty() {
            sys.push(vec![Rat::zero(); d_hat]);
        }
        let kern = rat_kernel(&sys);
        debug_assert_eq!(kern.len(), 1, "simplicial cell facet normal");
        let alpha = &kern[0];
        let mut normal = vec![Rat::zero(); cell[0].len()];
        for (a, b) in alpha.iter().zip(cell) {
            for (n, g) in normal.iter_mut().zip(b) {
                *n += a.clone() * Rat::from_integer(g.clone());
            }
        }
        let mut n = primitive_int_vector(&normal);
        if dot_int(&n, &cell[i]).is_negative() {
            n = n.iter().map(|v| -v).collect();
        }
        debug_assert!(dot_int(&n, &cell[i]).is_positive());
        // Lexicographic sign of (n.w0, n_0, n_1, ...).
        let mut sign = 0;
        let lead = dot_int(&n, w0);
        if !lead.is_zero() {
            sign = if lead.is_positive() { 1 } else { -1 };
        } else {
            for v in &n {
                if !v.is_zero() {
                    sign = if v.is_positive() { 1 } else { -1 };
                    break;
                }
            }
        }
        strict[i] = sign < 0;
    }

    // Split generators by height.
    let mut verts: Vec<(usize, Vec<Rat>)> = Vec::new(); // (cell index, slice point)
    let mut rays: Vec<(usize, Vec<Int>)> = Vec::new();
    for (i, g) in cell.iter().enumerate() {
        let h = &g[dim];
        if h.is_zero() {
            rays.push((i, g[..dim].to_vec()));
        } else {
            let hq = Rat::from_integer(h.clone());
            verts.push((
                i,
                g[..dim]
                    .iter()
                    .map(|v| Rat::from_integer(v.clone()) / hq.clone())
                    .collect(),
            ));
        }
    }
    if verts.is_empty() {
        return Ok(Vec::new()); // cell lies in the recession hyperplane
    }

    // Bounding box of the truncated prism.
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    let mut box_points: u64 = 1;
    for k in 0..dim {
        let mut vmin = verts[0].1[k].clone();
        let mut vmax = vmin.clone();
        for (_, v) in &verts[1..] {
            if v[k] < vmin {
                vmin = v[k].clone();
            }
            if v[k] > vmax {
                vmax = v[k].clone();
            }
        }
        let mut rneg = Int::zero();
        let mut rpos = Int::zero();
        for (_, r) in &rays {
            if r[k].is_negative() {
                rneg += &r[k];
            } else {
                rpos += &r[k];
            }
        }
        let lo_k = (vmin + Rat::from_integer(rneg)).floor().to_integer();
        let hi_k = (vmax + Rat::from_integer(rpos)).ceil().to_integer();
        let width: u64 = (&hi_k - &lo_k + Int::one())
            .max(Int::zero())
            .try_into()
            .map_err(|_| PresburgerError::EnumerationOverflow)?;
        box_points = box_points.saturating_mul(width.max(1));
        lo.push(lo_k);
        hi.push(hi_k);
    }
    if box_points > MAX_BOX_POINTS {
        return Err(PresburgerError::EnumerationOverflow);
    }

    // Barycentric system: columns are vertices (with a 1-row) and rays
    // (with a 0-row); unknowns (lambda, phi).
    let ncols = verts.len() + rays.len();
    let mut sys: Vec<Vec<Rat>> = Vec::new();
    for k in 0..dim {
        let mut row = Vec::with_capacity(ncols);
        for (_, v) in &verts {
            row.push(v[k].clone());
        }
        for (_, r) in &rays {
            row.push(Rat::from_integer(r[k].clone()));
        }
        sys.push(row);
    }
    sys.push(
        (0..ncols)
            .map(|j| if j < verts.len() { Rat::one() } else { Rat::zero() })
            .collect(),
    );

    let ray_vecs: Vec<Vec<Int>> = rays.iter().map(|(_, r)| r.clone()).collect();
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    loop {
        let mut rhs: Vec<Rat> = cursor
            .iter()
            .map(|v| Rat::from_integer(v.clone()))
            .collect();
        rhs.push(Rat::one());
        if let Some(sol) = exact_unique_solution(&sys, &rhs) {
            let mut ok = true;
            for (j, (ci, _)) in verts.iter().enumerate() {
                let lam = &sol[j];
                if lam.is_negative() || (strict[*ci] && lam.is_zero()) {
                    ok = false;
                    break;
                }
            }
            if ok {
                for (j, (ci, _)) in rays.iter().enumerate() {
                    let phi = &sol[verts.len() + j];
                    let inside = if strict[*ci] {
                        phi.is_positive() && *phi <= Rat::one()
                    } else {
                        !phi.is_negative() && *phi < Rat::one()
                    };
                    if !inside {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.push((cursor.clone(), ray_vecs.clone()));
            }
        }
        // Advance the box cursor.
        let mut k = 0;
        loop {
            if k == dim {
                let mut sorted = out;
                sorted.sort();
                return Ok(sorted);
            }
            cursor[k] += 1;
            if cursor[k] <= hi[k] {
                break;
            }
            cursor[k] = lo[k].clone();
            k += 1;
        }
    }
}

/// Solve a system with full column rank; None when inconsistent. The
/// solution, when it exists, is unique.
fn exact_unique_solution(sys: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let sol = rat_solve(sys, rhs)?;
    // rat_solve returns a solution of the consistent system; with full
    // column rank it is the unique one. Verify to be safe against
    // underdetermined degenerate input.
    for (row, want) in sys.iter().zip(rhs) {
        let mut acc = Rat::zero();
        for (a, x) in row.iter().zip(&sol) {
            acc += a.clone() * x.clone();
        }
        if &acc != want {
            return None;
        }
    }
    Some(sol)
}
