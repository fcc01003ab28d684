use crate::error::{Error, Result};

/// Edge weights of a [`CsrMatrix`].
///
/// Homogeneous weights are a first-class variant storing one scalar, not a
/// degenerate per-edge array: the kernels read the scalar once instead of
/// streaming `nnz` identical doubles from memory.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Homogeneous(f64),
    PerEdge(Vec<f64>),
}

impl Weights {
    #[inline]
    pub fn at(&self, edge: usize) -> f64 {
        match self {
            Weights::Homogeneous(w) => *w,
            Weights::PerEdge(ws) => ws[edge],
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self, Weights::Homogeneous(_))
    }
}

/// Compressed sparse row connectivity.
///
/// Canonical form is enforced at construction: `indptr` is non-decreasing
/// with `indptr[0] == 0` and `indptr[n_rows] == nnz`, column indices are in
/// range and strictly increasing within each row, and per-edge weights have
/// length `nnz`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    indptr: Vec<u32>,
    indices: Vec<u32>,
    weights: Weights,
}

impl CsrMatrix {
    /// Builds from raw CSR arrays, validating canonical form.
    pub fn from_parts(
        n_rows: usize,
        n_cols: usize,
        indptr: Vec<u32>,
        indices: Vec<u32>,
        weights: Weights,
    ) -> Result<Self> {
        if indptr.len() != n_rows + 1 {
            return Err(Error::NonCanonicalCsr(format!(
                "indptr length {} != n_rows + 1 = {}",
                indptr.len(),
                n_rows + 1
            )));
        }
        if indptr[0] != 0 {
            return Err(Error::NonCanonicalCsr("indptr[0] != 0".into()));
        }
        let nnz = indices.len();
        if indptr[n_rows] as usize != nnz {
            return Err(Error::NonCanonicalCsr(format!(
                "indptr[n_rows] = {} != nnz = {}",
                indptr[n_rows], nnz
            )));
        }
        for w in indptr.windows(2) {
            if w[1] < w[0] {
                return Err(Error::NonCanonicalCsr("indptr decreases".into()));
            }
        }
        for r in 0..n_rows {
            let row = &indices[indptr[r] as usize..indptr[r + 1] as usize];
            for (k, &c) in row.iter().enumerate() {
                if c as usize >= n_cols {
                    return Err(Error::NonCanonicalCsr(format!(
                        "column {c} out of range in row {r}"
                    )));
                }
                if k > 0 && row[k - 1] >= c {
                    return Err(Error::NonCanonicalCsr(format!(
                        "columns not strictly increasing in row {r}"
                    )));
                }
            }
        }
        if let Weights::PerEdge(ws) = &weights {
            if ws.len() != nnz {
                return Err(Error::NonCanonicalCsr(format!(
                    "weights length {} != nnz {}",
                    ws.len(),
                    nnz
                )));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            indptr,
            indices,
            weights,
        })
    }

    /// Normalizing constructor: sorts entries row-major and merges duplicate
    /// coordinates by summing their weights. Always produces per-edge weights.
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::NonCanonicalCsr(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = entries.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_counts = vec![0u32; n_rows];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut weights = Vec::with_capacity(sorted.len());
        let mut prev: Option<(usize, usize)> = None;
        for &(r, c, w) in &sorted {
            if prev == Some((r, c)) {
                *weights.last_mut().expect("merge follows a push") += w;
            } else {
                indices.push(c as u32);
                weights.push(w);
                row_counts[r] += 1;
                prev = Some((r, c));
            }
        }
        let mut indptr = vec![0u32; n_rows + 1];
        for r in 0..n_rows {
            indptr[r + 1] = indptr[r] + row_counts[r];
        }
        Self::from_parts(n_rows, n_cols, indptr, indices, Weights::PerEdge(weights))
    }

    /// Builds a homogeneous-weight matrix from coordinate pairs.
    ///
    /// Duplicate coordinates are rejected rather than merged: merging would
    /// silently break the all-edges-share-one-weight contract.
    pub fn from_pairs_homogeneous(
        n_rows: usize,
        n_cols: usize,
        pairs: &[(usize, usize)],
        weight: f64,
    ) -> Result<Self> {
        let mut sorted: Vec<(usize, usize)> = pairs.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::NonCanonicalCsr(format!(
                    "duplicate edge ({}, {}) with homogeneous weights",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut row_counts = vec![0u32; n_rows];
        let mut indices = Vec::with_capacity(sorted.len());
        for &(r, c) in &sorted {
            if r >= n_rows || c >= n_cols {
                return Err(Error::NonCanonicalCsr(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
            indices.push(c as u32);
            row_counts[r] += 1;
        }
        let mut indptr = vec![0u32; n_rows + 1];
        for r in 0..n_rows {
            indptr[r + 1] = indptr[r] + row_counts[r];
        }
        Self::from_parts(
            n_rows,
            n_cols,
            indptr,
            indices,
            Weights::Homogeneous(weight),
        )
    }

    /// CSR of the identity with a homogeneous diagonal weight.
    pub fn identity(n: usize, weight: f64) -> Self {
        let indptr = (0..=n as u32).collect();
        let indices = (0..n as u32).collect();
        Self {
            n_rows: n,
            n_cols: n,
            indptr,
            indices,
            weights: Weights::Homogeneous(weight),
        }
    }

    /// Extracts the nonzero pattern of a dense matrix (exact zero is absent).
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.n_rows() {
            for c in 0..m.n_cols() {
                let w = m.get(r, c);
                if w != 0.0 {
                    entries.push((r, c, w));
                }
            }
        }
        Self::from_entries(m.n_rows(), m.n_cols(), &entries).expect("dense pattern is canonical")
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn indptr(&self) -> &[u32] {
        &self.indptr
    }

    #[inline]
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    #[inline]
    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Half-open edge range of row `r`.
    #[inline]
    pub fn row_range(&self, r: usize) -> std::ops::Range<usize> {
        self.indptr[r] as usize..self.indptr[r + 1] as usize
    }

    /// `(column, weight)` pairs of row `r`.
    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.row_range(r)
            .map(move |j| (self.indices[j] as usize, self.weights.at(j)))
    }

    /// The transpose, constructed as a canonical CSR matrix.
    pub fn transpose(&self) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(self.nnz());
        for r in 0..self.n_rows {
            for (c, w) in self.row_entries(r) {
                entries.push((c, r, w));
            }
        }
        match &self.weights {
            Weights::Homogeneous(w) => {
                let pairs: Vec<(usize, usize)> = entries.iter().map(|&(r, c, _)| (r, c)).collect();
                Self::from_pairs_homogeneous(self.n_cols, self.n_rows, &pairs, *w)
                    .expect("transpose of canonical matrix is canonical")
            }
            Weights::PerEdge(_) => Self::from_entries(self.n_cols, self.n_rows, &entries)
                .expect("transpose of canonical matrix is canonical"),
        }
    }

    /// Row-major dense copy.
    pub fn densify(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for r in 0..self.n_rows {
            for (c, w) in self.row_entries(r) {
                m.set(r, c, m.get(r, c) + w);
            }
        }
        m
    }

    /// Analytic storage footprint: offsets + indices + weight block.
    pub fn state_bytes(&self) -> u64 {
        let weight_bytes = match &self.weights {
            Weights::Homogeneous(_) => 8,
            Weights::PerEdge(ws) => 8 * ws.len() as u64,
        };
        4 * self.indptr.len() as u64 + 4 * self.indices.len() as u64 + weight_bytes
    }
}

/// Row-major dense matrix, the oracle/baseline representation.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(Error::dim("DenseMatrix::from_rows", n_cols, row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n_cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn state_bytes(&self) -> u64 {
        8 * self.data.len() as u64
    }
}
