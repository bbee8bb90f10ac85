from app.spectral.field import (
    PHI,
    MultiplierSymbol,
    SpectralField,
    apply_multiplier,
    bessel_symbol,
    derivative_symbol,
    frequencies,
    japanese,
    phi,
    propagator_symbol,
)
from app.spectral.norms import (
    NormDescriptor,
    fourier_lebesgue_norm,
    sobolev_norm,
    wsp_norm,
)
from app.spectral.products import product
from app.spectral.sums import phi_beta, phi_beta_regime

__all__ = [
    "PHI",
    "MultiplierSymbol",
    "NormDescriptor",
    "SpectralField",
    "apply_multiplier",
    "bessel_symbol",
    "derivative_symbol",
    "fourier_lebesgue_norm",
    "frequencies",
    "japanese",
    "phi",
    "phi_beta",
    "phi_beta_regime",
    "product",
    "propagator_symbol",
    "sobolev_norm",
    "wsp_norm",
]
