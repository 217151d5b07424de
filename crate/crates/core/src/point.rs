//! Closed points given by a residue field and coordinates in it.

use crate::field::{FieldDescriptor, FieldElement};

/// A closed point of affine space over `k`, presented by its residue field
/// `k(p)` and coordinates there.
///
/// The residue field is either `k` itself (a rational point) or a simple
/// extension of `k` generated by the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpec {
    residue_field: FieldDescriptor,
    coords: Vec<FieldElement>,
}

impl PointSpec {
    pub fn new(residue_field: FieldDescriptor, coords: Vec<FieldElement>) -> Self {
        assert!(
            coords.iter().all(|c| c.coords().len() == residue_field.degree()),
            "coordinates must live in the residue field"
        );
        PointSpec { residue_field, coords }
    }

    pub fn residue_field(&self) -> &FieldDescriptor {
        &self.residue_field
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Degree of the residue field over `ambient`, or `None` when the
    /// residue field does not sit over `ambient` by a single step.
    pub fn degree_over(&self, ambient: &FieldDescriptor) -> Option<usize> {
        if &self.residue_field == ambient {
            Some(1)
        } else if !ambient.is_extension() && self.residue_field.base_descriptor() == *ambient {
            Some(self.residue_field.degree())
        } else {
            None
        }
    }

    /// `sum c_i * x_i` evaluated at the point.
    pub fn linear_value(&self, coefficients: &[i64]) -> FieldElement {
        let k = &self.residue_field;
        self.coords
            .iter()
            .zip(coefficients)
            .fold(k.zero(), |acc, (x, &c)| k.add(&acc, &k.mul(&k.from_i64(c), x)))
    }

    pub fn format(&self) -> String {
        let coords: Vec<String> = self.coords.iter().map(|c| self.residue_field.format_element(c)).collect();
        format!("({}) over {}", coords.join(", "), self.residue_field)
    }
}
