//! Bitwise Boolean mode of three inputs.
//!
//! The production path is the word-parallel form `(c & (a ^ b)) | (a & b)`,
//! which votes on every bit of every byte at once. [`mode_n_bits`] is the
//! counting definition, kept as a reference oracle.

use crate::error::{Error, Result};
use crate::frame::Frame;

/// Three binary inputs, one column of the eight-row truth table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitTriple {
    pub x1: bool,
    pub x2: bool,
    pub x3: bool,
}

impl BitTriple {
    /// All eight triples in truth-table order (x1 most significant).
    pub fn all() -> impl Iterator<Item = BitTriple> {
        (0u8..8).map(|i| BitTriple {
            x1: i & 4 != 0,
            x2: i & 2 != 0,
            x3: i & 1 != 0,
        })
    }

    pub fn majority(self) -> bool {
        majority3_bit(self.x1, self.x2, self.x3)
    }
}

pub fn majority3_bit(x1: bool, x2: bool, x3: bool) -> bool {
    (x3 & (x1 ^ x2)) | (x1 & x2)
}

#[inline]
pub fn majority3_byte(a: u8, b: u8, c: u8) -> u8 {
    (c & (a ^ b)) | (a & b)
}

#[inline]
fn majority3_word(a: u64, b: u64, c: u64) -> u64 {
    (c & (a ^ b)) | (a & b)
}

/// Writes the bytewise majority of `a`, `b`, `c` into `out`, eight bytes per
/// word. All four slices must have equal length.
pub fn majority3_slice(out: &mut [u8], a: &[u8], b: &[u8], c: &[u8]) {
    assert!(
        a.len() == out.len() && b.len() == out.len() && c.len() == out.len(),
        "majority3_slice: length mismatch"
    );
    const W: usize = 8;
    let mut out_words = out.chunks_exact_mut(W);
    let mut a_words = a.chunks_exact(W);
    let mut b_words = b.chunks_exact(W);
    let mut c_words = c.chunks_exact(W);
    for (((o, x), y), z) in (&mut out_words)
        .zip(&mut a_words)
        .zip(&mut b_words)
        .zip(&mut c_words)
    {
        let word = |s: &[u8]| u64::from_ne_bytes(s.try_into().unwrap());
        let m = majority3_word(word(x), word(y), word(z));
        o.copy_from_slice(&m.to_ne_bytes());
    }
    for (((o, &x), &y), &z) in out_words
        .into_remainder()
        .iter_mut()
        .zip(a_words.remainder())
        .zip(b_words.remainder())
        .zip(c_words.remainder())
    {
        *o = majority3_byte(x, y, z);
    }
}

/// Per-byte modal image of three same-shaped frames. Channels vote
/// independently.
pub fn majority3_image(img1: &Frame, img2: &Frame, img3: &Frame) -> Result<Frame> {
    img1.ensure_same_shape(img2)?;
    img1.ensure_same_shape(img3)?;
    let mut out = Frame::with_shape(img1.shape(), vec![0; img1.data().len()])?;
    majority3_slice(out.data_mut(), img1.data(), img2.data(), img3.data());
    Ok(out)
}

/// The partial products of the three-input majority, for inspection.
#[derive(Clone, Debug)]
pub struct MajorityTrace {
    /// `img1 ^ img2`
    pub xor12: Frame,
    /// `img3 & (img1 ^ img2)`
    pub third_and_xor: Frame,
    /// `img1 & img2`
    pub and12: Frame,
    /// `(img3 & (img1 ^ img2)) | (img1 & img2)`
    pub result: Frame,
}

pub fn majority3_image_traced(img1: &Frame, img2: &Frame, img3: &Frame) -> Result<MajorityTrace> {
    img1.ensure_same_shape(img2)?;
    img1.ensure_same_shape(img3)?;
    let shape = img1.shape();
    let zip2 = |f: &dyn Fn(u8, u8) -> u8, x: &[u8], y: &[u8]| -> Vec<u8> {
        x.iter().zip(y).map(|(&p, &q)| f(p, q)).collect()
    };
    let xor12 = zip2(&|p, q| p ^ q, img1.data(), img2.data());
    let third_and_xor = zip2(&|p, q| p & q, img3.data(), &xor12);
    let and12 = zip2(&|p, q| p & q, img1.data(), img2.data());
    let result = zip2(&|p, q| p | q, &third_and_xor, &and12);
    Ok(MajorityTrace {
        xor12: Frame::with_shape(shape, xor12)?,
        third_and_xor: Frame::with_shape(shape, third_and_xor)?,
        and12: Frame::with_shape(shape, and12)?,
        result: Frame::with_shape(shape, result)?,
    })
}

/// Arity and vote threshold of an n-input Boolean mode. `n` must be odd so
/// there are no ties; the threshold is `(n + 1) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeSpec {
    n: usize,
    threshold: usize,
}

impl ModeSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "mode arity must be odd and at least 3, got {n}"
            )));
        }
        Ok(ModeSpec {
            n,
            threshold: n.div_ceil(2),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }
}

/// Returns true iff at least `spec.threshold()` of the bits are set.
pub fn mode_n_bits(bits: &[bool], spec: ModeSpec) -> Result<bool> {
    if bits.len() != spec.n {
        return Err(Error::Arity {
            expected: spec.n,
            actual: bits.len(),
        });
    }
    Ok(bits.iter().filter(|&&b| b).count() >= spec.threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Row S of the eight-possibility truth table, columns in x1x2x3 binary order.
    const TABLE_S: [bool; 8] = [false, false, false, true, false, true, true, true];

    fn bit_loop_oracle(a: u8, b: u8, c: u8) -> u8 {
        let spec = ModeSpec::new(3).unwrap();
        (0..8).fold(0u8, |acc, i| {
            let bits = [a >> i & 1 == 1, b >> i & 1 == 1, c >> i & 1 == 1];
            acc | (u8::from(mode_n_bits(&bits, spec).unwrap()) << i)
        })
    }

    fn sum_of_products(a: u8, b: u8, c: u8) -> u8 {
        (!a & b & c) | (a & !b & c) | (a & b & !c) | (a & b & c)
    }

    #[test]
    fn bit_matches_truth_table() {
        for (t, expected) in BitTriple::all().zip(TABLE_S) {
            assert_eq!(t.majority(), expected, "{t:?}");
        }
        assert!(majority3_bit(false, true, true));
        assert!(!majority3_bit(false, false, true));
        assert!(majority3_bit(true, true, true));
    }

    #[test]
    fn byte_examples() {
        assert_eq!(majority3_byte(0x64, 0x64, 0x00), 0x64);
        assert_eq!(majority3_byte(0xFF, 0x00, 0xAA), 0xAA);
        assert_eq!(bit_loop_oracle(0xB2, 0x74, 0xD6), 0xF6);
        assert_eq!(majority3_byte(0xB2, 0x74, 0xD6), 0xF6);
    }

    #[test]
    fn mode_n_bits_threshold() {
        let three = ModeSpec::new(3).unwrap();
        assert_eq!(three.threshold(), 2);
        assert!(mode_n_bits(&[false, true, true], three).unwrap());
        let five = ModeSpec::new(5).unwrap();
        assert_eq!(five.threshold(), 3);
        assert!(!mode_n_bits(&[true, true, false, false, false], five).unwrap());
        assert!(mode_n_bits(&[true, true, true, false, false], five).unwrap());
    }

    #[test]
    fn mode_n_bits_agrees_with_majority3_bit() {
        let spec = ModeSpec::new(3).unwrap();
        for t in BitTriple::all() {
            assert_eq!(
                mode_n_bits(&[t.x1, t.x2, t.x3], spec).unwrap(),
                t.majority()
            );
        }
    }

    #[test]
    fn mode_spec_and_arity_errors() {
        assert!(ModeSpec::new(1).is_err());
        assert!(ModeSpec::new(4).is_err());
        let spec = ModeSpec::new(3).unwrap();
        assert!(matches!(
            mode_n_bits(&[true, false], spec),
            Err(Error::Arity {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn exhaustive_single_byte_sweep() {
        for v in 0..=255u8 {
            for (a, b, c) in [
                (v, 0, 0),
                (0, v, 0xFF),
                (v, !v, 0x5A),
                (v, v.rotate_left(3), !v),
            ] {
                assert_eq!(majority3_byte(a, b, c), bit_loop_oracle(a, b, c));
            }
        }
    }

    #[test]
    fn slice_handles_word_and_tail() {
        for len in [0usize, 1, 7, 8, 9, 23, 64] {
            let a: Vec<u8> = (0..len).map(|i| (i * 37) as u8).collect();
            let b: Vec<u8> = (0..len).map(|i| (i * 91 + 5) as u8).collect();
            let c: Vec<u8> = (0..len).map(|i| (i * 13 + 200) as u8).collect();
            let mut out = vec![0; len];
            majority3_slice(&mut out, &a, &b, &c);
            for i in 0..len {
                assert_eq!(out[i], bit_loop_oracle(a[i], b[i], c[i]));
            }
        }
    }

    #[test]
    fn image_two_of_three_and_uniform() {
        let x = Frame::from_raw(3, 2, 3, (0..18).map(|i| i * 11).collect()).unwrap();
        let y = Frame::new(3, 2, 3, 0x9C).unwrap();
        assert_eq!(majority3_image(&x, &x, &y).unwrap(), x);
        assert_eq!(majority3_image(&y, &x, &x).unwrap(), x);

        let f = |v| Frame::new(4, 4, 1, v).unwrap();
        let m = majority3_image(&f(10), &f(20), &f(30)).unwrap();
        let expected = bit_loop_oracle(10, 20, 30);
        assert!(m.data().iter().all(|&b| b == expected));
    }

    #[test]
    fn image_rejects_shape_mismatch() {
        let a = Frame::new(2, 2, 1, 0).unwrap();
        let b = Frame::new(2, 3, 1, 0).unwrap();
        assert!(matches!(
            majority3_image(&a, &a, &b),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            majority3_image_traced(&a, &b, &a),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn trace_result_matches_image() {
        let a = Frame::from_raw(5, 1, 1, vec![1, 2, 3, 250, 17]).unwrap();
        let b = Frame::from_raw(5, 1, 1, vec![9, 2, 77, 0, 16]).unwrap();
        let c = Frame::from_raw(5, 1, 1, vec![1, 8, 3, 255, 99]).unwrap();
        let t = majority3_image_traced(&a, &b, &c).unwrap();
        assert_eq!(t.result, majority3_image(&a, &b, &c).unwrap());
    }

    proptest! {
        #[test]
        fn byte_symmetric_under_permutation(a: u8, b: u8, c: u8) {
            let m = majority3_byte(a, b, c);
            for p in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(majority3_byte(p.0, p.1, p.2), m);
            }
        }

        #[test]
        fn byte_idempotent_on_agreement(a: u8, b: u8) {
            prop_assert_eq!(majority3_byte(a, a, b), a);
            prop_assert_eq!(majority3_byte(a, b, a), a);
            prop_assert_eq!(majority3_byte(b, a, a), a);
        }

        #[test]
        fn flipping_one_input_bit_touches_only_that_bit(a: u8, b: u8, c: u8, i in 0u32..8, which in 0usize..3) {
            let mut inputs = [a, b, c];
            inputs[which] ^= 1 << i;
            let before = majority3_byte(a, b, c);
            let after = majority3_byte(inputs[0], inputs[1], inputs[2]);
            prop_assert_eq!((before ^ after) & !(1u8 << i), 0);
        }

        #[test]
        fn byte_matches_oracle_and_sum_of_products(a: u8, b: u8, c: u8) {
            let m = majority3_byte(a, b, c);
            prop_assert_eq!(m, bit_loop_oracle(a, b, c));
            prop_assert_eq!(m, sum_of_products(a, b, c));
        }

        #[test]
        fn slice_equals_bytewise(data in proptest::collection::vec(any::<(u8, u8, u8)>(), 0..100)) {
            let a: Vec<u8> = data.iter().map(|t| t.0).collect();
            let b: Vec<u8> = data.iter().map(|t| t.1).collect();
            let c: Vec<u8> = data.iter().map(|t| t.2).collect();
            let mut out = vec![0; data.len()];
            majority3_slice(&mut out, &a, &b, &c);
            for (k, &(x, y, z)) in data.iter().enumerate() {
                prop_assert_eq!(out[k], majority3_byte(x, y, z));
            }
        }
    }
}
