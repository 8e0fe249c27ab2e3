"""Unital quantum channels and their mixtures of unitaries."""
from .channels import (
    AffineUnitaryCombo,
    ChoiState,
    KrausChannel,
    MixtureOfUnitaries,
    affine_unitary_decomposition,
    choi_to_kraus,
    hs_contraction_decomposition,
    is_cp,
    is_tp,
    is_unital,
    kraus_to_choi,
)

__version__ = "0.1.0"
