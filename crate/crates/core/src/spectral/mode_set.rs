use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::spectral::grid::PhysicalGrid;

/// Integer wavevector on the periodic box `[0, 2π]³`.
pub type Wavevector = [i32; 3];

/// The truncated set of nonzero wavevectors `0 < max|k_i| ≤ K`, stored in
/// lexicographic order.
///
/// Lexicographic order over the symmetric cube makes negation an index
/// reversal: the mode at position `i` has its negative at `len - 1 - i`.
/// Indices `len/2..len` form the half-space of lexicographically positive
/// wavevectors.
pub struct ModeSet {
    cutoff: usize,
    modes: Vec<Wavevector>,
    wavevectors: Vec<[f64; 3]>,
    k2: Vec<f64>,
    // Dense cube of side 2K+1 mapping a wavevector to its index (or -1 for k = 0).
    lookup: Vec<i32>,
    triads: OnceLock<Triads>,
    grid: OnceLock<PhysicalGrid>,
}

/// Interacting pairs `(k, q)` with `k + q = p` for every `p` in the positive half,
/// in CSR layout.
pub(crate) struct Triads {
    pub offsets: Vec<usize>,
    pub pairs: Vec<(u32, u32)>,
}

impl ModeSet {
    pub fn new(cutoff: usize) -> Result<Arc<Self>> {
        if cutoff == 0 {
            return Err(Error::Config("mode cutoff K must be positive".into()));
        }
        if cutoff > 64 {
            return Err(Error::Config(format!("mode cutoff K = {cutoff} is beyond desk scale")));
        }
        let k = cutoff as i32;
        let side = 2 * cutoff + 1;
        let mut modes = Vec::with_capacity(side * side * side - 1);
        let mut lookup = vec![-1; side * side * side];
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -k..=k {
                    if kx == 0 && ky == 0 && kz == 0 {
                        continue;
                    }
                    let cell = ((kx + k) as usize * side + (ky + k) as usize) * side + (kz + k) as usize;
                    lookup[cell] = modes.len() as i32;
                    modes.push([kx, ky, kz]);
                }
            }
        }
        let wavevectors: Vec<[f64; 3]> = modes.iter().map(|m| [m[0] as f64, m[1] as f64, m[2] as f64]).collect();
        let k2 = wavevectors.iter().map(|w| w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).collect();
        Ok(Arc::new(Self { cutoff, modes, wavevectors, k2, lookup, triads: OnceLock::new(), grid: OnceLock::new() }))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Wavevector] {
        &self.modes
    }

    pub fn mode(&self, index: usize) -> Wavevector {
        self.modes[index]
    }

    pub fn wavevector(&self, index: usize) -> [f64; 3] {
        self.wavevectors[index]
    }

    /// `|k|²` for the mode at `index`; the Stokes eigenvalue on the torus.
    pub fn k2(&self, index: usize) -> f64 {
        self.k2[index]
    }

    pub fn index_of(&self, k: Wavevector) -> Option<usize> {
        let c = self.cutoff as i32;
        if k.iter().any(|&x| x < -c || x > c) {
            return None;
        }
        let side = (2 * c + 1) as usize;
        let cell = ((k[0] + c) as usize * side + (k[1] + c) as usize) * side + (k[2] + c) as usize;
        match self.lookup[cell] {
            -1 => None,
            i => Some(i as usize),
        }
    }

    /// Index of `-k` for the mode at `index`.
    pub fn negation(&self, index: usize) -> usize {
        self.modes.len() - 1 - index
    }

    /// Indices of the lexicographically positive half-space.
    pub fn positive_half(&self) -> std::ops::Range<usize> {
        self.modes.len() / 2..self.modes.len()
    }

    pub fn same_as(&self, other: &ModeSet) -> bool {
        self.cutoff == other.cutoff
    }

    pub(crate) fn triads(&self) -> &Triads {
        self.triads.get_or_init(|| {
            let half = self.positive_half();
            let mut offsets = Vec::with_capacity(half.len() + 1);
            let mut pairs = Vec::new();
            offsets.push(0);
            for p in half {
                let target = self.modes[p];
                for (ki, k) in self.modes.iter().enumerate() {
                    let q = [target[0] - k[0], target[1] - k[1], target[2] - k[2]];
                    if let Some(qi) = self.index_of(q) {
                        pairs.push((ki as u32, qi as u32));
                    }
                }
                offsets.push(pairs.len());
            }
            Triads { offsets, pairs }
        })
    }

    /// Smallest grid on which `|y|⁴` (degree 4K) and all cubic products are
    /// integrated exactly: `4K + 1` points per axis.
    pub fn quadrature_size(&self) -> usize {
        4 * self.cutoff + 1
    }

    /// Shared physical grid of size [`quadrature_size`](Self::quadrature_size).
    pub fn quadrature_grid(&self) -> &PhysicalGrid {
        self.grid.get_or_init(|| PhysicalGrid::new(self.quadrature_size()))
    }
}

impl fmt::Debug for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeSet").field("cutoff", &self.cutoff).field("len", &self.modes.len()).finish()
    }
}
