//! Table-backed arithmetic for GF(q), q <= 9.
//!
//! Elements are indices 0..q. For prime q the index is the residue itself.
//! For q = p^e an element c_0 + c_1 x + ... + c_{e-1} x^{e-1} is stored as
//! the base-p integer sum c_i p^i, and multiplication reduces modulo a fixed
//! primitive polynomial, so the tables for a given q are identical between
//! runs and machines.

use super::AlgebraError;

/// Moduli for the extension fields, as coefficients c_0..c_e with the leading
/// 1 included. Each is primitive: the class of x generates the multiplicative
/// group.
const MODULUS_4: &[u8] = &[1, 1, 1]; // x^2 + x + 1
const MODULUS_8: &[u8] = &[1, 1, 0, 1]; // x^3 + x + 1
const MODULUS_9: &[u8] = &[2, 2, 1]; // x^2 + 2x + 2

/// GF(q) with full addition/multiplication/negation/inversion tables.
#[derive(Clone)]
pub struct Field {
    p: u8,
    e: u8,
    q: u8,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>, // inv[0] is unused
    primitive: u8,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field(GF({}))", self.q)
    }
}

impl Field {
    /// Builds GF(q). The tables are verified exhaustively against the field
    /// axioms before the value is returned.
    pub fn new(q: u16) -> Result<Field, AlgebraError> {
        if q > 9 {
            return Err(AlgebraError::OrderTooLarge(q));
        }
        let (p, e) = match q {
            2 | 3 | 5 | 7 => (q as u8, 1u8),
            4 => (2, 2),
            8 => (2, 3),
            9 => (3, 2),
            _ => return Err(AlgebraError::NonPrimeCharacteristic(q)),
        };
        let q = q as u8;
        let modulus: &[u8] = match q {
            4 => MODULUS_4,
            8 => MODULUS_8,
            9 => MODULUS_9,
            _ => &[],
        };

        let digits = |a: u8| -> Vec<u8> {
            let mut a = a;
            let mut out = vec![0u8; e as usize];
            for d in out.iter_mut() {
                *d = a % p;
                a /= p;
            }
            out
        };
        let undigits = |ds: &[u8]| -> u8 { ds.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = vec![0u8; q as usize * q as usize];
        let mut mul = vec![0u8; q as usize * q as usize];
        for a in 0..q {
            for b in 0..q {
                let da = digits(a);
                let db = digits(b);
                let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a as usize) * q as usize + b as usize] = undigits(&sum);

                // Polynomial product, then reduction modulo the modulus. For
                // e = 1 the product is a bare residue.
                let mut prod = vec![0u16; 2 * e as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
                    }
                }
                for i in (e as usize..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    // x^i = x^{i-e} * (-(modulus minus leading term))
                    for (j, &m) in modulus[..e as usize].iter().enumerate() {
                        let sub = (c * m as u16) % p as u16;
                        prod[i - e as usize + j] =
                            (prod[i - e as usize + j] + p as u16 - sub) % p as u16;
                    }
                }
                let red: Vec<u8> = prod[..e as usize].iter().map(|&x| x as u8).collect();
                mul[(a as usize) * q as usize + b as usize] = undigits(&red);
            }
        }

        let mut neg = vec![0u8; q as usize];
        let mut inv = vec![0u8; q as usize];
        for a in 0..q {
            for b in 0..q {
                if add[(a as usize) * q as usize + b as usize] == 0 {
                    neg[a as usize] = b;
                }
                if a != 0 && mul[(a as usize) * q as usize + b as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }

        let field = Field {
            p,
            e,
            q,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        let mut field = field;
        field.primitive = field
            .find_primitive()
            .expect("a finite field has a primitive element");
        field
            .verify_axioms()
            .unwrap_or_else(|why| panic!("field table construction for q={q} is broken: {why}"));
        Ok(field)
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn characteristic(&self) -> usize {
        self.p as usize
    }

    pub fn degree(&self) -> usize {
        self.e as usize
    }

    /// A fixed generator of the multiplicative group: the smallest primitive
    /// residue for prime q, the class of x for extension fields.
    pub fn primitive_element(&self) -> u8 {
        self.primitive
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; a must be nonzero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    fn find_primitive(&self) -> Option<u8> {
        if self.e > 1 {
            // The moduli are primitive polynomials, so x itself works; its
            // index is p.
            return Some(self.p);
        }
        if self.q == 2 {
            return Some(1);
        }
        (2..self.q).find(|&g| self.multiplicative_order(g) == self.q as usize - 1)
    }

    fn multiplicative_order(&self, a: u8) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
            if n > self.q as usize {
                return 0; // not invertible
            }
        }
        n
    }

    /// Exhaustively checks every field axiom over all element pairs and
    /// triples, plus the order of the primitive element. Cheap for q <= 9
    /// (at most 729 triples) and run once at construction.
    pub fn verify_axioms(&self) -> Result<(), String> {
        let q = self.q;
        for a in 0..q {
            if self.add(a, 0) != a {
                return Err(format!("additive identity fails at {a}"));
            }
            if self.mul(a, 1) != a {
                return Err(format!("multiplicative identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("negation fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(format!("inversion fails at {a}"));
            }
            if self.mul(a, 0) != 0 {
                return Err(format!("zero absorption fails at {a}"));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) {
                    return Err(format!("addition not commutative at ({a},{b})"));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("multiplication not commutative at ({a},{b})"));
                }
                if a != 0 && b != 0 && self.mul(a, b) == 0 {
                    return Err(format!("zero divisors at ({a},{b})"));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("addition not associative at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplication not associative at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        if self.multiplicative_order(self.primitive) != q as usize - 1 {
            return Err(format!(
                "primitive element {} does not generate the multiplicative group",
                self.primitive
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_supported_orders_build_and_verify() {
        for q in [2u16, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            assert_eq!(f.q(), q as usize);
            assert!(f.verify_axioms().is_ok());
        }
    }

    #[test]
    fn rejects_non_prime_powers_and_large_orders() {
        assert_eq!(Field::new(6).unwrap_err(), AlgebraError::NonPrimeCharacteristic(6));
        assert_eq!(Field::new(1).unwrap_err(), AlgebraError::NonPrimeCharacteristic(1));
        assert_eq!(Field::new(0).unwrap_err(), AlgebraError::NonPrimeCharacteristic(0));
        assert_eq!(Field::new(16).unwrap_err(), AlgebraError::OrderTooLarge(16));
        assert_eq!(Field::new(11).unwrap_err(), AlgebraError::OrderTooLarge(11));
    }

    #[test]
    fn gf4_matches_hand_reduction() {
        // In GF(4) with modulus x^2+x+1, the class a of x satisfies
        // a*a = a+1. Indices: 0, 1, a=2, a+1=3.
        let f = Field::new(4).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1); // a(a+1) = a^2+a = 1
        assert_eq!(f.add(2, 3), 1); // characteristic 2
        assert_eq!(f.primitive_element(), 2);
    }

    #[test]
    fn gf8_and_gf9_powers_cycle_correctly() {
        // Independent oracle: repeated multiplication by the primitive
        // element must enumerate all q-1 nonzero elements before returning
        // to 1.
        for q in [8u16, 9] {
            let f = Field::new(q).unwrap();
            let g = f.primitive_element();
            let mut seen = vec![false; f.q()];
            let mut x = 1u8;
            for _ in 0..f.q() - 1 {
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
                x = f.mul(x, g);
            }
            assert_eq!(x, 1);
        }
    }

    #[test]
    fn gf9_sample_products() {
        // GF(9) = GF(3)[x]/(x^2+2x+2); index of c0+c1*x is c0+3c1.
        // x*x = -2x-2 = x+1 -> index 4.
        let f = Field::new(9).unwrap();
        assert_eq!(f.mul(3, 3), 4);
        // (x+1)(x+2) = x^2 + 3x + 2 = x^2 + 2 = (x+1) + 2 = x + 3 = x  -> index 3.
        assert_eq!(f.mul(4, 5), 3);
    }

    #[test]
    fn prime_field_primitive_roots() {
        assert_eq!(Field::new(2).unwrap().primitive_element(), 1);
        assert_eq!(Field::new(3).unwrap().primitive_element(), 2);
        assert_eq!(Field::new(5).unwrap().primitive_element(), 2);
        assert_eq!(Field::new(7).unwrap().primitive_element(), 3);
    }
}
