use std::collections::HashMap;

use num_bigint::BigInt;

use super::table::same_table;
use super::{LaurentError, LaurentPolynomial, Monomial, TableRef};

/// A ring homomorphism between Laurent polynomial rings, given by the
/// image of every source symbol.
///
/// Images that are monomials may be raised to negative powers; any other
/// image may only appear with nonnegative exponents.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: TableRef,
    target: TableRef,
    images: Vec<Image>,
}

#[derive(Debug, Clone)]
enum Image {
    Monomial(Monomial),
    Poly(LaurentPolynomial),
}

impl RingMap {
    /// Sends every source symbol to the target symbol of the same name.
    pub fn by_name(source: &TableRef, target: &TableRef) -> Result<Self, LaurentError> {
        let images = source
            .symbols()
            .iter()
            .map(|s| {
                target
                    .lookup(&s.name)
                    .map(|j| Image::Monomial(Monomial::var(target.len(), j, 1)))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Like [`RingMap::by_name`], but symbols missing from the target are
    /// sent to 1 until an explicit image is set.
    pub fn by_name_partial(source: &TableRef, target: &TableRef) -> Self {
        let images = source
            .symbols()
            .iter()
            .map(|s| {
                let m = match target.index_of(&s.name) {
                    Some(j) => Monomial::var(target.len(), j, 1),
                    None => Monomial::one(target.len()),
                };
                Image::Monomial(m)
            })
            .collect();
        Self {
            source: source.clone(),
            target: target.clone(),
            images,
        }
    }

    pub fn source(&self) -> &TableRef {
        &self.source
    }

    pub fn target(&self) -> &TableRef {
        &self.target
    }

    pub fn set(&mut self, i: usize, image: LaurentPolynomial) -> Result<(), LaurentError> {
        if !same_table(image.table(), &self.target) {
            return Err(LaurentError::TableMismatch);
        }
        self.images[i] = match image.as_monomial() {
            Some(m) => Image::Monomial(m.clone()),
            None => Image::Poly(image),
        };
        Ok(())
    }

    pub fn set_monomial(&mut self, i: usize, m: Monomial) -> Result<(), LaurentError> {
        if m.len() != self.target.len() {
            return Err(LaurentError::LengthMismatch {
                expected: self.target.len(),
                found: m.len(),
            });
        }
        self.images[i] = Image::Monomial(m);
        Ok(())
    }

    pub fn image(&self, i: usize) -> LaurentPolynomial {
        match &self.images[i] {
            Image::Monomial(m) => LaurentPolynomial::monomial(&self.target, m.clone()),
            Image::Poly(p) => p.clone(),
        }
    }

    /// Image of a monomial whose support only meets monomial images.
    pub fn apply_monomial(&self, m: &Monomial) -> Result<Monomial, LaurentError> {
        let mut out = Monomial::one(self.target.len());
        for (i, e) in m.support() {
            match &self.images[i] {
                Image::Monomial(im) => out = out.mul(&im.pow(e)),
                Image::Poly(_) => return Err(LaurentError::NonMonomialInverse),
            }
        }
        Ok(out)
    }

    pub fn apply(&self, p: &LaurentPolynomial) -> Result<LaurentPolynomial, LaurentError> {
        if !same_table(p.table(), &self.source) {
            return Err(LaurentError::TableMismatch);
        }
        let mut powers: HashMap<(usize, i64), LaurentPolynomial> = HashMap::new();
        let mut shifted: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in p.terms() {
            let mut mono = Monomial::one(self.target.len());
            let mut factor: Option<LaurentPolynomial> = None;
            for (i, e) in m.support() {
                match &self.images[i] {
                    Image::Monomial(im) => mono = mono.mul(&im.pow(e)),
                    Image::Poly(q) => {
                        if e < 0 {
                            return Err(LaurentError::NonMonomialInverse);
                        }
                        let qe = match powers.get(&(i, e)) {
                            Some(v) => v.clone(),
                            None => {
                                let v = q.pow(e)?;
                                powers.insert((i, e), v.clone());
                                v
                            }
                        };
                        factor = Some(match factor {
                            None => qe,
                            Some(f) => f.try_mul(&qe)?,
                        });
                    }
                }
            }
            match factor {
                None => shifted.push((mono, c.clone())),
                Some(f) => {
                    shifted.extend(f.terms().map(|(fm, fc)| (fm.mul(&mono), fc * c)))
                }
            }
        }
        LaurentPolynomial::from_terms(&self.target, shifted)
    }
}
