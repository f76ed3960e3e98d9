use crate::error::{Error, Result};

/// Clause count may not exceed this multiple of the variable count. Inputs
/// are expected to be sparse already; no sparsification is attempted.
pub const CLAUSE_CAP_FACTOR: usize = 4;

/// A DIMACS-style literal: `+v` or `-v` for variable `v >= 1`.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    var_count: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for clause in &clauses {
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > var_count {
                    return Err(Error::domain(format!(
                        "literal {lit} references a variable outside [1, {var_count}]"
                    )));
                }
            }
        }
        Ok(CnfFormula { var_count, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Fails when the formula has more than `factor * n` clauses.
    pub fn check_clause_cap(&self, factor: usize) -> Result<()> {
        let cap = factor * self.var_count;
        if self.clauses.len() > cap {
            return Err(Error::Guard(format!(
                "{} clauses exceed the cap of {factor}·n = {cap}",
                self.clauses.len()
            )));
        }
        Ok(())
    }

    /// The same formula without clauses containing a complementary pair.
    pub fn without_tautologies(&self) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.iter().any(|&l| c.contains(&-l)))
            .cloned()
            .collect();
        CnfFormula {
            var_count: self.var_count,
            clauses,
        }
    }

    /// Evaluates a full assignment; bit `i` of `assignment` is variable `i + 1`.
    pub fn is_satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let bit = (assignment >> (l.unsigned_abs() - 1)) & 1 == 1;
                bit == (l > 0)
            })
        })
    }

    /// DIMACS text with one clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A partial assignment to the contiguous variable block
/// `first_var .. first_var + width` (1-based), encoded in binary: bit `i`
/// holds the value of variable `first_var + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockAssignment {
    pub first_var: usize,
    pub width: usize,
    pub bits: u64,
}

impl BlockAssignment {
    pub fn value_of(&self, var: usize) -> Option<bool> {
        if var >= self.first_var && var < self.first_var + self.width {
            Some((self.bits >> (var - self.first_var)) & 1 == 1)
        } else {
            None
        }
    }

    /// True when some literal of `clause` is set to true. Variables outside
    /// the block satisfy nothing.
    pub fn satisfies(&self, clause: &[Literal]) -> bool {
        clause.iter().any(|&l| {
            self.value_of(l.unsigned_abs() as usize)
                .is_some_and(|value| value == (l > 0))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_literal() {
        assert!(CnfFormula::new(2, vec![vec![3]]).is_err());
        assert!(CnfFormula::new(2, vec![vec![0]]).is_err());
    }

    #[test]
    fn clause_cap() {
        let f = CnfFormula::new(1, vec![vec![1]; 5]).unwrap();
        assert!(matches!(
            f.check_clause_cap(CLAUSE_CAP_FACTOR),
            Err(Error::Guard(_))
        ));
        let f = CnfFormula::new(1, vec![vec![1]; 4]).unwrap();
        assert!(f.check_clause_cap(CLAUSE_CAP_FACTOR).is_ok());
    }

    #[test]
    fn block_assignment_only_sees_its_block() {
        let phi = BlockAssignment {
            first_var: 2,
            width: 1,
            bits: 1,
        };
        assert!(phi.satisfies(&[2]));
        assert!(!phi.satisfies(&[-2]));
        assert!(!phi.satisfies(&[1, -1]));
    }

    #[test]
    fn tautologies_are_dropped() {
        let f = CnfFormula::new(2, vec![vec![1, -1], vec![2]]).unwrap();
        assert_eq!(f.without_tautologies().clauses(), &[vec![2]]);
    }
}
