//! Constraint data: dimensions, margin vectors, their normalized form, and
//! concrete admixed arrays with the statistics the constraints are built from.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Array dimensions: `n` rows (individuals) and `p` loci, so each matrix of
/// the pair is `n x 2p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n: usize,
    pub p: usize,
}

impl Dims {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::EmptyDims { n, p });
        }
        Ok(Self { n, p })
    }

    /// Number of columns of each matrix.
    pub fn width(&self) -> usize {
        2 * self.p
    }
}

/// The constraint triple `(a, phi0, phi1)`.
///
/// `a[n]` is the row local ancestry tally of row `n` (its row sum in `A`);
/// `phi0[p]` and `phi1[p]` are the ancestry-0 and ancestry-1 allele dosages
/// at locus `p`. A `MarginSpec` can only be built through [`MarginSpec::new`]
/// or [`MarginSpec::semiregular`], so every value in circulation is valid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarginSpec {
    dims: Dims,
    a: Vec<usize>,
    phi0: Vec<usize>,
    phi1: Vec<usize>,
}

impl MarginSpec {
    pub fn new(
        n: usize,
        p: usize,
        a: Vec<usize>,
        phi0: Vec<usize>,
        phi1: Vec<usize>,
    ) -> Result<Self> {
        validate(Dims::new(n, p)?, &a, &phi0, &phi1)?;
        Ok(Self {
            dims: Dims { n, p },
            a,
            phi0,
            phi1,
        })
    }

    /// Uniform margins: every row tally is `a`, every locus has dosages
    /// `(phi0, phi1)`.
    pub fn semiregular(n: usize, p: usize, a: usize, phi0: usize, phi1: usize) -> Result<Self> {
        Self::new(n, p, vec![a; n], vec![phi0; p], vec![phi1; p])
    }

    /// The semi-regular one-half case: row tallies `P`, both dosages `N`.
    pub fn semiregular_half(n: usize, p: usize) -> Result<Self> {
        Self::semiregular(n, p, p, n, n)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.n
    }

    pub fn p(&self) -> usize {
        self.dims.p
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn phi0(&self) -> &[usize] {
        &self.phi0
    }

    pub fn phi1(&self) -> &[usize] {
        &self.phi1
    }

    /// Total dosage `phi0[p] + phi1[p]` at locus `p`.
    pub fn dosage(&self, p: usize) -> usize {
        self.phi0[p] + self.phi1[p]
    }

    /// True when all three margin vectors are constant.
    pub fn is_semiregular(&self) -> bool {
        let uniform = |v: &[usize]| v.windows(2).all(|w| w[0] == w[1]);
        uniform(&self.a) && uniform(&self.phi0) && uniform(&self.phi1)
    }

    pub fn normalize(&self) -> NormalizedMargins {
        normalize(self)
    }
}

/// Checks every [`MarginSpec`] invariant; errors name the offending index
/// (1-based, as in the usual `a_n`, `phi_{p,0}` notation) and the bound.
pub fn validate(dims: Dims, a: &[usize], phi0: &[usize], phi1: &[usize]) -> Result<()> {
    let Dims { n, p } = dims;
    for (what, got, expected) in [("a", a.len(), n), ("phi0", phi0.len(), p), ("phi1", phi1.len(), p)] {
        if got != expected {
            return Err(Error::DimensionMismatch { what, got, expected });
        }
    }
    for (i, &ai) in a.iter().enumerate() {
        if ai > 2 * p {
            return Err(Error::OutOfRange(format!(
                "a_{} = {} > 2P = {}",
                i + 1,
                ai,
                2 * p
            )));
        }
    }
    for (j, (&f0, &f1)) in phi0.iter().zip(phi1).enumerate() {
        if f0 + f1 > 2 * n {
            return Err(Error::OutOfRange(format!(
                "phi_{{{0},0}} + phi_{{{0},1}} = {1} > 2N = {2}",
                j + 1,
                f0 + f1,
                2 * n
            )));
        }
    }
    Ok(())
}

/// Margins scaled to `[0, 1]`: `abar = a / 2P`, `f0 = phi0 / 2N`,
/// `f1 = phi1 / 2N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMargins {
    pub abar: Vec<f64>,
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
}

impl NormalizedMargins {
    /// Multiplies back to integer margins, rounding to nearest.
    pub fn denormalize(&self, dims: Dims) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let scale = |v: &[f64], s: usize| -> Vec<usize> {
            v.iter().map(|x| libm::round(x * s as f64) as usize).collect()
        };
        (
            scale(&self.abar, 2 * dims.p),
            scale(&self.f0, 2 * dims.n),
            scale(&self.f1, 2 * dims.n),
        )
    }
}

pub fn normalize(spec: &MarginSpec) -> NormalizedMargins {
    let two_p = (2 * spec.p()) as f64;
    let two_n = (2 * spec.n()) as f64;
    NormalizedMargins {
        abar: spec.a.iter().map(|&x| x as f64 / two_p).collect(),
        f0: spec.phi0.iter().map(|&x| x as f64 / two_n).collect(),
        f1: spec.phi1.iter().map(|&x| x as f64 / two_n).collect(),
    }
}

/// A concrete pair `[A, X]`, both stored row-major with row width `2P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmixedArray {
    dims: Dims,
    ancestry: Vec<u8>,
    dosage: Vec<u8>,
}

impl AdmixedArray {
    pub fn new(dims: Dims, ancestry: Vec<u8>, dosage: Vec<u8>) -> Result<Self> {
        let cells = dims.n * dims.width();
        for (what, m) in [("A", &ancestry), ("X", &dosage)] {
            if m.len() != cells {
                return Err(Error::DimensionMismatch {
                    what,
                    got: m.len(),
                    expected: cells,
                });
            }
            if let Some(i) = m.iter().position(|&v| v > 1) {
                return Err(Error::OutOfRange(format!(
                    "{what}[{}][{}] = {} is not binary",
                    i / dims.width(),
                    i % dims.width(),
                    m[i]
                )));
            }
        }
        Ok(Self {
            dims,
            ancestry,
            dosage,
        })
    }

    pub fn zeros(dims: Dims) -> Self {
        let cells = dims.n * dims.width();
        Self {
            dims,
            ancestry: vec![0; cells],
            dosage: vec![0; cells],
        }
    }

    /// Builds an array from row slices, e.g. for hand-written fixtures.
    pub fn from_rows(ancestry: &[&[u8]], dosage: &[&[u8]]) -> Result<Self> {
        let n = ancestry.len();
        let width = ancestry.first().map_or(0, |r| r.len());
        if width % 2 != 0 {
            return Err(Error::OutOfRange(format!("row width {width} is odd")));
        }
        let dims = Dims::new(n, width / 2)?;
        let flatten = |rows: &[&[u8]], what: &'static str| -> Result<Vec<u8>> {
            if rows.len() != n {
                return Err(Error::DimensionMismatch {
                    what,
                    got: rows.len(),
                    expected: n,
                });
            }
            let mut out = Vec::with_capacity(n * width);
            for r in rows {
                if r.len() != width {
                    return Err(Error::DimensionMismatch {
                        what,
                        got: r.len(),
                        expected: width,
                    });
                }
                out.extend_from_slice(r);
            }
            Ok(out)
        };
        Self::new(dims, flatten(ancestry, "A rows")?, flatten(dosage, "X rows")?)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn ancestry(&self, row: usize, col: usize) -> u8 {
        self.ancestry[row * self.dims.width() + col]
    }

    pub fn dosage(&self, row: usize, col: usize) -> u8 {
        self.dosage[row * self.dims.width() + col]
    }

    /// Mutable access to the flat `A` and `X` buffers, for sweeps that
    /// rewrite an array in place.
    pub fn cells_mut(&mut self) -> (&mut [u8], &mut [u8]) {
        (&mut self.ancestry, &mut self.dosage)
    }

    pub fn statistics(&self) -> ArrayStatistics {
        array_statistics(self)
    }
}

/// Summary statistics of a concrete array.
///
/// `f0[p]` / `f1[p]` are the ancestry-specific allele frequencies; `None`
/// marks a frequency whose denominator (the number of ancestry-0 / ancestry-1
/// cells at the locus) is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayStatistics {
    pub row_tallies: Vec<usize>,
    pub phi0: Vec<usize>,
    pub phi1: Vec<usize>,
    pub f0: Vec<Option<f64>>,
    pub f1: Vec<Option<f64>>,
}

pub fn array_statistics(arr: &AdmixedArray) -> ArrayStatistics {
    let Dims { n, p } = arr.dims;
    let row_tallies = (0..n)
        .map(|r| (0..2 * p).map(|c| arr.ancestry(r, c) as usize).sum())
        .collect();

    let mut phi0 = vec![0usize; p];
    let mut phi1 = vec![0usize; p];
    let mut anc1 = vec![0usize; p];
    for r in 0..n {
        for locus in 0..p {
            for col in [locus, p + locus] {
                let a = arr.ancestry(r, col) as usize;
                let x = arr.dosage(r, col) as usize;
                anc1[locus] += a;
                phi1[locus] += a * x;
                phi0[locus] += (1 - a) * x;
            }
        }
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    let f0 = (0..p).map(|j| ratio(phi0[j], 2 * n - anc1[j])).collect();
    let f1 = (0..p).map(|j| ratio(phi1[j], anc1[j])).collect();

    ArrayStatistics {
        row_tallies,
        phi0,
        phi1,
        f0,
        f1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semiregular_half_is_valid() {
        let spec = MarginSpec::new(2, 2, vec![2, 2], vec![2, 2], vec![2, 2]).unwrap();
        assert_eq!(spec, MarginSpec::semiregular_half(2, 2).unwrap());
        assert!(spec.is_semiregular());
    }

    #[test]
    fn row_tally_above_2p_rejected() {
        let err = MarginSpec::new(1, 1, vec![3], vec![0], vec![0]).unwrap_err();
        match err {
            Error::OutOfRange(msg) => assert!(msg.contains("a_1") && msg.contains("> 2P"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dosage_sum_above_2n_rejected() {
        let err = MarginSpec::new(1, 1, vec![1], vec![2], vec![1]).unwrap_err();
        match err {
            Error::OutOfRange(msg) => assert!(msg.contains("phi_{1,0} + phi_{1,1}") && msg.contains("> 2N")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let err = MarginSpec::new(2, 1, vec![1], vec![0], vec![0]).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                what: "a",
                got: 1,
                expected: 2
            }
        );
        assert!(matches!(
            MarginSpec::new(0, 1, vec![], vec![0], vec![0]),
            Err(Error::EmptyDims { .. })
        ));
    }

    #[test]
    fn normalize_examples() {
        let nm = MarginSpec::semiregular_half(2, 2).unwrap().normalize();
        assert_eq!(nm.abar, vec![0.5, 0.5]);
        assert_eq!(nm.f0, vec![0.5, 0.5]);
        let nm = MarginSpec::new(2, 1, vec![0, 0], vec![1], vec![0]).unwrap().normalize();
        assert_eq!(nm.f0, vec![0.25]);
    }

    #[test]
    fn semiregular_broadcast() {
        let spec = MarginSpec::semiregular(1, 1, 1, 1, 1).unwrap();
        assert_eq!((spec.a(), spec.phi0(), spec.phi1()), (&[1][..], &[1][..], &[1][..]));
        let spec = MarginSpec::semiregular(9, 9, 9, 9, 9).unwrap();
        assert_eq!(spec, MarginSpec::semiregular_half(9, 9).unwrap());
        assert_eq!(spec.a().len(), 9);
    }

    #[test]
    fn zero_array_statistics() {
        let stats = AdmixedArray::zeros(Dims::new(3, 2).unwrap()).statistics();
        assert_eq!(stats.row_tallies, vec![0; 3]);
        assert_eq!(stats.phi0, vec![0; 2]);
        assert_eq!(stats.phi1, vec![0; 2]);
        assert_eq!(stats.f1, vec![None; 2]);
        assert_eq!(stats.f0, vec![Some(0.0); 2]);
    }

    #[test]
    fn all_ones_single_cell() {
        let arr = AdmixedArray::from_rows(&[&[1, 1]], &[&[1, 1]]).unwrap();
        let stats = arr.statistics();
        assert_eq!(stats.row_tallies, vec![2]);
        assert_eq!(stats.phi1, vec![2]);
        assert_eq!(stats.phi0, vec![0]);
        assert_eq!(stats.f0, vec![None]);
    }

    // N=4, P=5. Row 1 carries 7 ancestry-1 cells; locus 1 (columns 1 and 6)
    // has six ancestry-1 cells holding three alleles and two ancestry-0 cells
    // holding one.
    #[test]
    fn four_by_five_example() {
        let a: [&[u8]; 4] = [
            &[1, 1, 0, 1, 1, 1, 1, 0, 1, 0],
            &[1, 0, 0, 1, 0, 1, 1, 1, 0, 0],
            &[0, 1, 1, 0, 0, 1, 0, 0, 1, 1],
            &[1, 0, 1, 1, 0, 0, 0, 1, 1, 0],
        ];
        let x: [&[u8]; 4] = [
            &[1, 0, 1, 0, 1, 1, 0, 0, 1, 0],
            &[0, 1, 0, 0, 1, 0, 1, 0, 0, 1],
            &[0, 0, 1, 1, 0, 0, 1, 0, 0, 1],
            &[1, 1, 0, 0, 0, 1, 0, 1, 1, 0],
        ];
        let stats = AdmixedArray::from_rows(&a, &x).unwrap().statistics();
        assert_eq!(stats.row_tallies[0] as f64 / 10.0, 0.7);
        assert_eq!(stats.phi0[0], 1);
        assert_eq!(stats.phi1[0], 3);
        assert_eq!(stats.f0[0], Some(0.5));
        assert_eq!(stats.f1[0], Some(0.5));
    }

    #[test]
    fn non_binary_entry_rejected() {
        assert!(AdmixedArray::from_rows(&[&[2, 0]], &[&[0, 0]]).is_err());
    }
}
