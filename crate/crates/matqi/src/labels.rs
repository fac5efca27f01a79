use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemLabel {
    pub name: String,
    pub dim: usize,
}

impl SystemLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        let name = name.into();
        if dim == 0 {
            return Err(Error::InvalidLabel(format!("`{name}` has dimension 0")));
        }
        if name.is_empty() {
            return Err(Error::InvalidLabel("empty name".into()));
        }
        Ok(Self { name, dim })
    }

    /// Infallible constructor for internal use with literal names.
    pub fn of(name: &str, dim: usize) -> Self {
        Self::new(name, dim).expect("valid label")
    }
}

pub fn validate(factors: &[SystemLabel]) -> Result<()> {
    for (i, f) in factors.iter().enumerate() {
        if f.dim == 0 {
            return Err(Error::InvalidLabel(format!("`{}` has dimension 0", f.name)));
        }
        if factors[..i].iter().any(|g| g.name == f.name) {
            return Err(Error::DuplicateLabel(f.name.clone()));
        }
    }
    Ok(())
}

pub fn dims(factors: &[SystemLabel]) -> Vec<usize> {
    factors.iter().map(|f| f.dim).collect()
}

pub fn position(factors: &[SystemLabel], name: &str) -> Result<usize> {
    factors
        .iter()
        .position(|f| f.name == name)
        .ok_or_else(|| Error::UnknownLabel(name.to_string()))
}

pub fn total_dim(factors: &[SystemLabel]) -> usize {
    factors.iter().map(|f| f.dim).product()
}
