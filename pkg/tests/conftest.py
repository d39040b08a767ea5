"""Shared fixtures and independent oracles for the test suite."""

import math

import numpy as np
import pytest
from scipy import integrate

from kkbec.model import ModelParams


@pytest.fixture
def standard_params():
    """N=9 mono-metric set with |Omega|/nU = 0.1 (tower/dispersion figures)."""
    return ModelParams(
        species_count=9,
        atom_mass=1.0,
        density=1.0,
        self_interaction=1.0,
        cross_interaction=0.1,
        rabi=-0.1,
    )


@pytest.fixture
def figure_params():
    """N=9 mono-metric set with |Omega|/nU = 1e-3 (correlator figure regime)."""
    return ModelParams(
        species_count=9,
        atom_mass=1.0,
        density=1.0,
        self_interaction=1.0,
        cross_interaction=1e-3,
        rabi=-1e-3,
    )


@pytest.fixture
def n3_params():
    return ModelParams(
        species_count=3,
        atom_mass=1.0,
        density=1.0,
        self_interaction=1.0,
        cross_interaction=0.1,
        rabi=-0.1,
    )


def k1_integral_oracle(x: float) -> float:
    """K1 via its integral representation, int_0^inf exp(-x cosh t) cosh t dt.

    Completely independent of the series/continued-fraction implementation in
    the package; adaptive quadrature on the finite interval where the
    integrand is above double-precision underflow.
    """
    t_max = math.acosh(746.0 / x) if x < 746.0 else 1.0
    value, _ = integrate.quad(
        lambda t: math.exp(-x * math.cosh(t)) * math.cosh(t),
        0.0,
        t_max,
        epsabs=0.0,
        epsrel=1e-13,
        limit=400,
    )
    return value


def closed_form_e_sq(params: ModelParams, p: float) -> np.ndarray:
    """All N squared energies from the printed closed forms, literal transcription.

    Written out term by term from the gap/speed expressions (not the package's
    factored evaluation) so a transcription error in either place is caught.
    """
    om = params.rabi
    n_u = params.nU
    n_up = params.nUprime
    alphas = params.alphas
    cos_a = np.cos(alphas)
    gap_sq = 4.0 * (
        om**2
        - n_u * om
        + (n_u * om - 2.0 * n_up * om - 2.0 * om**2) * cos_a
        + (2.0 * n_up * om + om**2) * cos_a**2
    )
    m_cs_sq = n_u - 2.0 * om + 2.0 * (n_up + om) * cos_a
    eps = p * p / (2.0 * params.atom_mass)
    return gap_sq + (m_cs_sq / params.atom_mass) * p * p + eps * eps
