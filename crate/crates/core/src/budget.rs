use crate::error::{Error, Result};

/// Limits on brute-force enumeration.
///
/// `max_elements` bounds the number of group elements produced by any single
/// enumeration (the group order for `GL_n`, `q^d` for unipotent subgroups);
/// `max_flags` bounds the dimension of a permutation module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: u128,
    pub max_flags: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_elements: 30_000_000,
            max_flags: 100_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_elements: u128::MAX,
            max_flags: u128::MAX,
        }
    }

    pub fn check_elements(&self, what: &str, required: u128) -> Result<()> {
        if required > self.max_elements {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required,
                limit: self.max_elements,
            });
        }
        Ok(())
    }

    pub fn check_flags(&self, what: &str, required: u128) -> Result<()> {
        if required > self.max_flags {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required,
                limit: self.max_flags,
            });
        }
        Ok(())
    }
}
