use crate::exact_poly::{Field, Poly};

/// `num / den` over a field. Equality is equality of rational functions.
#[derive(Clone, Debug)]
pub struct RatFunc<F: Field> {
    pub num: Poly<F>,
    pub den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Unreduced `num / den`; `den` must be nonzero.
    pub fn from_parts(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    /// Cancel the gcd and make the denominator monic.
    pub fn reduced(&self) -> Self {
        if self.num.is_zero() {
            return Self { num: Poly::zero(), den: Poly::one() };
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.exact_div(&g).expect("gcd divides numerator");
        let den = self.den.exact_div(&g).expect("gcd divides denominator");
        let lead = den.lead().expect("nonzero denominator").inv().expect("field");
        Self { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn derivative(&self) -> Self {
        let top = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::from_parts(top, self.den.square())
    }
}

impl<F: Field> PartialEq for RatFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}
