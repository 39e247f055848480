//! Degree-by-degree search for a minimal generating set of `F[V]^G`.

use std::fmt::Write as _;

use serde_json::json;

use super::{degree_bound, invariant_basis, Echelon, InvariantError, OrbitSum};
use crate::gf2m::Field;
use crate::poly::{Polynomial, VariableLayout};
use crate::rep::{DihedralModule, ModuleSpec};

/// Row-reduced basis of one degree slice of a subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceBasis {
    pub degree: u32,
    pub rank: usize,
    pub rows: Vec<Polynomial>,
}

/// Spans the products of `generators` with total degree `d`.
///
/// Every generator must be homogeneous of positive degree.
pub fn subalgebra_degree_slice(
    generators: &[Polynomial],
    d: u32,
    field: &Field,
) -> Result<SliceBasis, InvariantError> {
    let nvars = generators.first().map_or(0, Polynomial::nvars);
    let mut degrees = Vec::with_capacity(generators.len());
    for (i, g) in generators.iter().enumerate() {
        match g.homogeneous_degree() {
            Some(e) if e > 0 && g.nvars() == nvars => degrees.push(e),
            _ => return Err(InvariantError::NonHomogeneous(i)),
        }
    }
    // slices[k] spans A_k; A_k = sum over generators g of g * A_{k - deg g}
    let mut slices: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(nvars)]];
    for k in 1..=d {
        let mut ech = Echelon::new(field, nvars);
        for (g, &e) in generators.iter().zip(&degrees) {
            if e > k {
                continue;
            }
            for b in &slices[(k - e) as usize] {
                ech.insert(g.mul_unchecked(b, field));
            }
        }
        slices.push(ech.into_reduced_rows());
    }
    let rows = slices.pop().expect("slice d was just pushed");
    Ok(SliceBasis {
        degree: d,
        rank: rows.len(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRow {
    pub degree: u32,
    pub dim_invariants: usize,
    pub rank_from_below: usize,
    pub new_generators: Vec<OrbitSum>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    pub spec: ModuleSpec,
    pub d_max: u32,
    pub rows: Vec<DegreeRow>,
    pub beta_observed: Option<u32>,
    pub degree_bound: u32,
}

/// Keeps the terms `m` with `m <= sigma(m)`. Injective on `G`-invariant
/// polynomials, since those carry equal coefficients on `m` and `sigma(m)`.
fn project(f: &Polynomial, layout: &VariableLayout) -> Polynomial {
    let mut out = Polynomial::zero(f.nvars());
    for (m, c) in f.terms() {
        if *m <= m.sigma_image(layout) {
            out.add_term(m.clone(), c);
        }
    }
    out
}

/// For each degree `1..=d_max`, finds the orbit sums not generated by those
/// chosen in lower degrees. Candidates are scanned in ascending deglex order
/// of their representatives.
pub fn minimal_generator_degrees(
    module: &DihedralModule,
    d_max: u32,
) -> Result<GeneratorTable, InvariantError> {
    if d_max == 0 {
        return Err(InvariantError::Precondition(
            "d_max must be at least 1".into(),
        ));
    }
    let field = module.field();
    let layout = module.layout();
    let nvars = layout.nvars();

    // Below the current degree the chosen generators span everything, so
    // slice k of the subalgebra is the invariant basis of degree k.
    let mut bases: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(nvars)]];
    let mut chosen: Vec<(u32, Polynomial)> = Vec::new();
    let mut rows = Vec::with_capacity(d_max as usize);
    for d in 1..=d_max {
        let mut basis = invariant_basis(module, d);
        basis.reverse();
        let dim = basis.len();

        let mut ech = Echelon::new(field, nvars);
        'products: for (e, g) in &chosen {
            for b in &bases[(d - e) as usize] {
                if ech.rank() == dim {
                    break 'products;
                }
                ech.insert(project(&g.mul_unchecked(b, field), layout));
            }
        }
        let rank_from_below = ech.rank();

        let mut new_generators = Vec::new();
        for o in &basis {
            if ech.rank() == dim {
                break;
            }
            if ech.insert(project(&o.polynomial, layout)) {
                new_generators.push(o.clone());
            }
        }
        for o in &new_generators {
            chosen.push((d, o.polynomial.clone()));
        }
        bases.push(basis.into_iter().map(|o| o.polynomial).collect());
        rows.push(DegreeRow {
            degree: d,
            dim_invariants: dim,
            rank_from_below,
            new_generators,
        });
    }
    let beta_observed = rows
        .iter()
        .filter(|r| !r.new_generators.is_empty())
        .map(|r| r.degree)
        .max();
    Ok(GeneratorTable {
        spec: module.spec().clone(),
        d_max,
        rows,
        beta_observed,
        degree_bound: degree_bound(module),
    })
}

impl GeneratorTable {
    /// Degrees at which at least one new generator appears.
    pub fn generator_degrees(&self) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|r| !r.new_generators.is_empty())
            .map(|r| r.degree)
            .collect()
    }

    pub fn new_generator_count(&self, d: u32) -> usize {
        self.rows
            .iter()
            .find(|r| r.degree == d)
            .map_or(0, |r| r.new_generators.len())
    }

    fn representatives(&self, row: &DegreeRow) -> Vec<String> {
        let layout = self.spec.layout();
        row.new_generators
            .iter()
            .map(|o| o.polynomial.display(&layout).to_string())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "degree",
            "dim_invariants",
            "rank_from_below",
            "new_generators",
            "representatives",
        ])
        .expect("in-memory write");
        for row in &self.rows {
            w.write_record([
                row.degree.to_string(),
                row.dim_invariants.to_string(),
                row.rank_from_below.to_string(),
                row.new_generators.len().to_string(),
                self.representatives(row).join("; "),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|row| {
                json!({
                    "degree": row.degree,
                    "dim_invariants": row.dim_invariants,
                    "rank_from_below": row.rank_from_below,
                    "new_generators": row.new_generators.len(),
                    "representatives": self.representatives(row),
                })
            })
            .collect();
        json!({
            "spec": self.spec,
            "d_max": self.d_max,
            "degree_bound": self.degree_bound,
            "beta_observed": self.beta_observed,
            "unexplored_from": self.d_max + 1,
            "rows": rows,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree  dim  rank_from_below  new  representatives");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>6}  {:>3}  {:>15}  {:>3}  {}",
                row.degree,
                row.dim_invariants,
                row.rank_from_below,
                row.new_generators.len(),
                self.representatives(row).join("; ")
            );
        }
        let beta = self
            .beta_observed
            .map_or_else(|| "none".to_string(), |b| b.to_string());
        let _ = writeln!(out, "beta_observed: {beta}");
        let _ = writeln!(out, "degree bound s + max(r, p): {}", self.degree_bound);
        let _ = writeln!(out, "degrees > {} unexplored", self.d_max);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::FieldElement;
    use crate::linalg::Matrix;
    use crate::poly::{parse_polynomial, Monomial};
    use std::collections::BTreeSet;

    fn module(p: u32, weights: Vec<u32>, s: usize, t: usize) -> DihedralModule {
        DihedralModule::with_default_field(ModuleSpec::new(p, weights, s, t)).unwrap()
    }

    /// Dense oracle: all products of generators with total degree `d`,
    /// expanded in the monomial basis, then ranked.
    fn dense_rank(gens: &[Polynomial], d: u32, field: &Field) -> usize {
        fn rec(
            gens: &[Polynomial],
            start: usize,
            left: u32,
            acc: Polynomial,
            field: &Field,
            out: &mut Vec<Polynomial>,
        ) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for i in start..gens.len() {
                let e = gens[i].homogeneous_degree().unwrap();
                if e <= left {
                    rec(
                        gens,
                        i,
                        left - e,
                        acc.mul(&gens[i], field).unwrap(),
                        field,
                        out,
                    );
                }
            }
        }
        let nvars = gens[0].nvars();
        let mut products = Vec::new();
        rec(gens, 0, d, Polynomial::one(nvars), field, &mut products);
        let columns: BTreeSet<Monomial> = products
            .iter()
            .flat_map(|f| f.terms().map(|(m, _)| m.clone()))
            .collect();
        let rows: Vec<Vec<FieldElement>> = products
            .iter()
            .map(|f| columns.iter().map(|m| f.coefficient(m)).collect())
            .collect();
        if rows.is_empty() || columns.is_empty() {
            return 0;
        }
        Matrix::from_rows(rows).unwrap().rank(field)
    }

    #[test]
    fn slice_of_w1_generators() {
        let m = module(3, vec![1], 0, 0);
        let f = m.field();
        let l = m.layout();
        let gens = vec![
            parse_polynomial("x1*y1", l, f).unwrap(),
            parse_polynomial("x1^3 + y1^3", l, f).unwrap(),
        ];
        // degree 6: (xy)^3 and (x^3 + y^3)^2 = x^6 + y^6
        let slice = subalgebra_degree_slice(&gens, 6, f).unwrap();
        assert_eq!(slice.rank, 2);
        assert_eq!(dense_rank(&gens, 6, f), 2);
        let shown: Vec<String> = slice
            .rows
            .iter()
            .map(|r| r.display(l).to_string())
            .collect();
        assert_eq!(shown, ["x1^6 + y1^6", "x1^3*y1^3"]);
        for d in 0..=9 {
            assert_eq!(
                subalgebra_degree_slice(&gens, d, f).unwrap().rank,
                if d == 0 { 1 } else { dense_rank(&gens, d, f) },
                "degree {d}"
            );
        }
    }

    #[test]
    fn slice_rejects_inhomogeneous_generators() {
        let m = module(3, vec![1], 0, 0);
        let f = m.field();
        let l = m.layout();
        let gens = vec![
            parse_polynomial("x1*y1", l, f).unwrap(),
            parse_polynomial("x1^3 + x1*y1", l, f).unwrap(),
        ];
        assert_eq!(
            subalgebra_degree_slice(&gens, 4, f),
            Err(InvariantError::NonHomogeneous(1))
        );
        let constant = vec![Polynomial::one(2)];
        assert_eq!(
            subalgebra_degree_slice(&constant, 2, f),
            Err(InvariantError::NonHomogeneous(0))
        );
    }

    #[test]
    fn w1_generator_degrees() {
        let t = minimal_generator_degrees(&module(3, vec![1], 0, 0), 8).unwrap();
        assert_eq!(t.generator_degrees(), [2, 3]);
        assert_eq!(t.new_generator_count(2), 1);
        assert_eq!(t.new_generator_count(3), 1);
        assert_eq!(t.beta_observed, Some(3));

        let t = minimal_generator_degrees(&module(5, vec![1], 0, 0), 12).unwrap();
        assert_eq!(t.generator_degrees(), [2, 5]);
        assert_eq!(t.beta_observed, Some(5));
    }

    #[test]
    fn w1_plus_w0_within_bound() {
        let t = minimal_generator_degrees(&module(3, vec![1], 1, 0), 7).unwrap();
        assert_eq!(t.degree_bound, 4);
        assert!(t.beta_observed.unwrap() <= 4);
        assert_eq!(t.generator_degrees()[0], 1); // z1 + w1
    }

    #[test]
    fn chosen_generators_span_every_slice() {
        for (p, w, s, t) in [
            (3, vec![1], 1, 0),
            (3, vec![1, 1], 0, 1),
            (5, vec![1, 2], 0, 0),
        ] {
            let m = module(p, w, s, t);
            let table = minimal_generator_degrees(&m, 6).unwrap();
            let gens: Vec<Polynomial> = table
                .rows
                .iter()
                .flat_map(|r| r.new_generators.iter().map(|o| o.polynomial.clone()))
                .collect();
            for row in &table.rows {
                let slice = subalgebra_degree_slice(&gens, row.degree, m.field()).unwrap();
                assert_eq!(slice.rank, row.dim_invariants);
                assert_eq!(
                    row.rank_from_below + row.new_generators.len(),
                    row.dim_invariants
                );
            }
        }
    }

    #[test]
    fn table_outputs() {
        let t = minimal_generator_degrees(&module(3, vec![1], 0, 0), 4).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "degree,dim_invariants,rank_from_below,new_generators,representatives"
        );
        assert_eq!(lines[2], "2,1,0,1,x1*y1");
        assert_eq!(lines[3], "3,1,0,1,x1^3 + y1^3");
        assert_eq!(lines[4], "4,1,1,0,");
        let j = t.to_json();
        assert_eq!(j["beta_observed"], 3);
        assert_eq!(j["rows"][2]["representatives"][0], "x1^3 + y1^3");
        assert!(t.to_text().contains("degrees > 4 unexplored"));
        assert_eq!(
            minimal_generator_degrees(&module(3, vec![1], 0, 0), 0),
            Err(InvariantError::Precondition(
                "d_max must be at least 1".into()
            ))
        );
    }
}
