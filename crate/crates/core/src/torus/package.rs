use std::sync::Arc;

use crate::exactla::GaussianRational;
use crate::exterior::{conjugation, gram, graded, lefschetz_l, wedge_matrix, Grade, GradedBasis, WedgePart};
use crate::graded::GradedGram;
use crate::verifier::{KahlerPackage, PackageBlock};

use super::{SpectralLine, TorusError};

/// A torus truncated to finitely many spectral lines, as a package with one
/// block per Fourier mode.
#[derive(Clone, Debug)]
pub struct TorusPackage {
    pub package: KahlerPackage,
    pub lines: Vec<SpectralLine>,
    /// `(line, mode)` of every block, in block order.
    pub block_modes: Vec<(usize, usize)>,
}

/// Builds the package of `lines`.
///
/// On the mode `v` the package's `∂` and `∂̄` are `∂/2π = i·θ^{1,0}∧` and
/// `∂̄/2π = i·θ^{0,1}∧`, so its Laplacian acts by `‖v‖²`. Dividing by a
/// real constant keeps every identity between the true operators intact.
pub fn torus_package(n: usize, lines: &[SpectralLine]) -> Result<TorusPackage, TorusError> {
    let basis = GradedBasis::new(n);
    let layout = Arc::new(basis.layout().clone());
    let grams = basis
        .layout()
        .bidegrees()
        .into_iter()
        .map(|b| (b, gram(&basis, Grade::Bidegree(b))))
        .collect();
    let gram = Arc::new(GradedGram::new(&layout, grams)?);
    let lefschetz = Arc::new(graded(&basis, &lefschetz_l(&basis)));
    let conj = Arc::new(graded(&basis, &conjugation(&basis)));
    let i = GaussianRational::i();

    let mut blocks = Vec::new();
    let mut block_modes = Vec::new();
    for (li, line) in lines.iter().enumerate() {
        let base = blocks.len();
        for (mi, v) in line.modes.iter().enumerate() {
            let holo = wedge_matrix(&basis, &v.covector, WedgePart::Holo)?;
            let anti = wedge_matrix(&basis, &v.covector, WedgePart::Antiholo)?;
            blocks.push(PackageBlock {
                layout: layout.clone(),
                gram: gram.clone(),
                partial: graded(&basis, &holo.scale(&i)),
                dbar: graded(&basis, &anti.scale(&i)),
                lefschetz: lefschetz.clone(),
                conj: conj.clone(),
                conj_partner: base + line.partners[mi],
            });
            block_modes.push((li, mi));
        }
    }
    let package = KahlerPackage::new(n, blocks).expect("torus blocks are well formed");
    Ok(TorusPackage { package, lines: lines.to_vec(), block_modes })
}
