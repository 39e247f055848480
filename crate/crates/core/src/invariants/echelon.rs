//! Incremental sparse row echelon form over GF(2^m).
//!
//! Rows are polynomials; the pivot of a row is its deglex-leading monomial.

use std::collections::HashMap;

use crate::gf2m::{Field, FieldElement};
use crate::poly::{Monomial, Polynomial};

pub struct Echelon<'f> {
    field: &'f Field,
    nvars: usize,
    // Each row is monic in its leading term.
    rows: Vec<Polynomial>,
    pivots: HashMap<Monomial, usize>,
}

impl<'f> Echelon<'f> {
    pub fn new(field: &'f Field, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Top-reduces `row` until its leading monomial is not a pivot.
    pub fn reduce(&self, mut row: Polynomial) -> Polynomial {
        while let Some((lead, c)) = row.leading_term() {
            let Some(&k) = self.pivots.get(lead) else {
                break;
            };
            row.add_assign(&self.rows[k].scale(c, self.field));
        }
        row
    }

    pub fn contains(&self, row: &Polynomial) -> bool {
        self.reduce(row.clone()).is_zero()
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: Polynomial) -> bool {
        debug_assert_eq!(row.nvars(), self.nvars);
        let row = self.reduce(row);
        let Some((lead, c)) = row.leading_term() else {
            return false;
        };
        let lead = lead.clone();
        let inv = self.field.inv(c).expect("leading coefficient is nonzero");
        let row = if inv == FieldElement::ONE {
            row
        } else {
            row.scale(inv, self.field)
        };
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Fully reduced basis, sorted by descending leading monomial.
    pub fn into_reduced_rows(self) -> Vec<Polynomial> {
        let field = self.field;
        let mut rows = self.rows;
        rows.sort_by(|a, b| {
            let la = a.leading_term().map(|(m, _)| m);
            let lb = b.leading_term().map(|(m, _)| m);
            la.cmp(&lb)
        });
        // Ascending leading monomials: every row only needs the rows before it.
        let mut done: Vec<Polynomial> = Vec::with_capacity(rows.len());
        let mut pivots: HashMap<Monomial, usize> = HashMap::new();
        for row in rows {
            let (lead, c) = row.leading_term().expect("rows are nonzero");
            let lead = lead.clone();
            let mut out = Polynomial::term(c, lead.clone());
            let mut rest = row;
            rest.add_term(lead.clone(), c);
            while let Some((m, c)) = rest.leading_term() {
                let m = m.clone();
                match pivots.get(&m) {
                    Some(&k) => rest.add_assign(&done[k].scale(c, field)),
                    None => {
                        rest.add_term(m.clone(), c);
                        out.add_term(m, c);
                    }
                }
            }
            pivots.insert(lead, done.len());
            done.push(out);
        }
        done.reverse();
        done
    }
}
