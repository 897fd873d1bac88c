"""Gaussian field simulation: harmonic coefficients and needlet synthesis.

Random spherical harmonic coefficients a_lm with E|a_lm|^2 = C_l are drawn
per multipole from a counter-style seed mix of (master_seed, replicate_id, l),
so any replicate is reproducible in isolation and independent of execution
order.  The band-limited needlet field is synthesized on the product cubature
grid ring by ring: normalized associated Legendre functions are evaluated
once per (m, ring) block and the azimuth factors are applied as a single
complex matrix product per field.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cubature import SphereRule
from .model import BandProfile, NeedletWindow, PowerSpectrum, rho_tilde, spectrum_eval

__all__ = [
    "HarmonicCoeffs",
    "FieldOnGrid",
    "sample_alm",
    "normalized_assoc_legendre",
    "spherical_harmonic",
    "synthesize_beta",
    "empirical_correlation",
    "write_field",
    "read_field",
]

_MAGIC = b"NDLT"
_VERSION = 1


@dataclass(frozen=True)
class HarmonicCoeffs:
    """Random harmonic coefficients for l in [ell_min, ell_max], m in [0, l].

    alm[l - ell_min, m] holds a_lm for 0 <= m <= l (entries with m > l are
    zero); negative orders are implied by a_{l,-m} = (-1)^m conj(a_lm).
    a_{l0} is purely real.
    """

    ell_min: int
    ell_max: int
    alm: np.ndarray = field(repr=False)
    master_seed: int
    replicate_id: int


def sample_alm(s: PowerSpectrum, ell_min: int, ell_max: int,
               master_seed: int, replicate_id: int) -> HarmonicCoeffs:
    """Draw a_lm: a_l0 ~ N(0, C_l) real; Re, Im a_lm ~ N(0, C_l/2) for m >= 1.

    Each multipole gets its own generator seeded from
    (master_seed, replicate_id, l), so draws are order-independent.
    """
    ell_min, ell_max = int(ell_min), int(ell_max)
    if not 1 <= ell_min <= ell_max:
        raise ValueError("need 1 <= ell_min <= ell_max")
    alm = np.zeros((ell_max - ell_min + 1, ell_max + 1), dtype=complex)
    for l in range(ell_min, ell_max + 1):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=int(master_seed),
                                   spawn_key=(int(replicate_id), l)))
        cl = spectrum_eval(s, l)
        sd = np.sqrt(cl)
        row = alm[l - ell_min]
        row[0] = rng.normal(0.0, sd)
        if l >= 1:
            half = np.sqrt(0.5) * sd
            re = rng.normal(0.0, half, l)
            im = rng.normal(0.0, half, l)
            row[1:l + 1] = re + 1j * im
    return HarmonicCoeffs(ell_min=ell_min, ell_max=ell_max, alm=alm,
                          master_seed=int(master_seed), replicate_id=int(replicate_id))


def normalized_assoc_legendre(ell_max: int, m: int, x):
    """Fully normalized associated Legendre block S_lm(x), l = m .. ell_max.

    Normalization is chosen so that Y_lm(theta, phi) = S_lm(cos theta)
    e^{i m phi} (Condon-Shortley phase included); in particular
    S_00 = 1/sqrt(4 pi) and sum_m |Y_lm|^2 = (2l+1)/(4 pi).  The recurrence
    is normalized from the start, so no overflow occurs at large l.
    Returns an array of shape (ell_max - m + 1, len(x)).
    """
    m = int(m)
    ell_max = int(ell_max)
    if m < 0 or ell_max < m:
        raise ValueError("need 0 <= m <= ell_max")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise ValueError("argument outside [-1, 1]")
    out = np.zeros((ell_max - m + 1, len(x)))
    sint = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    s = np.full(len(x), 1.0 / np.sqrt(4.0 * np.pi))
    for mu in range(1, m + 1):
        s = -np.sqrt((2.0 * mu + 1.0) / (2.0 * mu)) * sint * s
    out[0] = s
    if ell_max == m:
        return out
    sprev = s
    s = np.sqrt(2.0 * m + 3.0) * x * s
    out[1] = s
    for l in range(m + 2, ell_max + 1):
        a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
        b = np.sqrt(((2.0 * l + 1.0) * ((l - 1.0) ** 2 - m * m))
                    / ((2.0 * l - 3.0) * (l * l - m * m)))
        s, sprev = a * x * s - b * sprev, s
        out[l - m] = s
    return out


def spherical_harmonic(ell: int, m: int, theta, phi):
    """Fully normalized Y_lm(theta, phi), 0 <= m <= l, theta in [0, pi]."""
    ell, m = int(ell), int(m)
    if not 0 <= m <= ell:
        raise ValueError("need 0 <= m <= l")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any((theta < -1e-12) | (theta > np.pi + 1e-12)):
        raise ValueError("theta outside [0, pi]")
    scalar = theta.ndim == 0 and phi.ndim == 0
    th = np.atleast_1d(theta)
    s = normalized_assoc_legendre(ell, m, np.cos(th))[ell - m]
    out = s * np.exp(1j * m * np.atleast_1d(phi))
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class FieldOnGrid:
    """Normalized needlet field values on the nodes of a product rule."""

    j: int
    rule: SphereRule
    values: np.ndarray = field(repr=False)  # shape (n_theta, n_phi)
    B_j: float
    replicate_id: int


@lru_cache(maxsize=8)
def _azimuth_matrix(n_phi: int, m_max: int) -> np.ndarray:
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return np.exp(1j * np.outer(np.arange(1, m_max + 1), phis))


def synthesize_beta(p: BandProfile, w: NeedletWindow, c: HarmonicCoeffs,
                    rule: SphereRule) -> FieldOnGrid:
    """Synthesize the unit-variance needlet field on the cubature grid.

    The field is sum_l b(l/2^j) sum_m a_lm Y_lm, divided by sqrt(B_j).
    Reality is enforced through the m >= 0 fold: the m = 0 block must come
    out real (a_l0 real), which is asserted before the imaginary part is
    discarded.
    """
    if c.ell_min < p.ell_min or c.ell_max > p.ell_max:
        raise ValueError("coefficients fall outside the band")
    lmax = c.ell_max
    if rule.n_phi <= lmax:
        raise ValueError("rule azimuth count cannot resolve the band")
    x = rule.cos_theta
    l0 = c.ell_min
    bfac = p.b_factors[l0 - p.ell_min: lmax + 1 - p.ell_min]
    g = np.zeros((lmax + 1, rule.n_theta), dtype=complex)
    for m in range(0, lmax + 1):
        tab = normalized_assoc_legendre(lmax, m, x)  # (lmax-m+1, n_theta)
        start = max(l0, m)
        coef = bfac[start - l0: lmax + 1 - l0] * c.alm[start - l0: lmax + 1 - l0, m]
        g[m] = coef @ tab[start - m:]
    if np.max(np.abs(g[0].imag)) >= 1e-12:
        raise AssertionError("m = 0 block has a nonzero imaginary part")
    em = _azimuth_matrix(rule.n_phi, lmax)
    vals = g[0].real[:, None] + 2.0 * np.real(g[1:].T @ em)
    vals = vals / np.sqrt(p.B_j)
    return FieldOnGrid(j=p.j, rule=rule, values=vals, B_j=p.B_j,
                       replicate_id=c.replicate_id)


@dataclass(frozen=True)
class PairCorrelation:
    """Sample correlation between two grid nodes with its prediction."""

    node_a: tuple
    node_b: tuple
    distance: float
    corr: float
    std_error: float
    predicted: float


def empirical_correlation(fields, pairs, profile: BandProfile):
    """Sample correlations across replicates for chosen node pairs.

    `fields` is a sequence of >= 500 FieldOnGrid replicates on a common rule,
    `pairs` a list of ((i1, k1), (i2, k2)) ring/azimuth index pairs.  Each
    result carries the prediction rho_tilde(cos d) for the pair's angular
    distance d and a large-sample standard error (1 - corr^2)/sqrt(R).
    """
    fields = list(fields)
    if len(fields) < 500:
        raise ValueError("need at least 500 replicates")
    rule = fields[0].rule
    r = len(fields)
    out = []
    for (i1, k1), (i2, k2) in pairs:
        a = np.array([f.values[i1, k1] for f in fields])
        b = np.array([f.values[i2, k2] for f in fields])
        if (i1, k1) == (i2, k2):
            corr = 1.0
            se = 0.0
        else:
            corr = float(np.corrcoef(a, b)[0, 1])
            se = (1.0 - corr ** 2) / np.sqrt(r)
        ct1, ct2 = rule.cos_theta[i1], rule.cos_theta[i2]
        st1 = np.sqrt(max(0.0, 1.0 - ct1 ** 2))
        st2 = np.sqrt(max(0.0, 1.0 - ct2 ** 2))
        cosd = ct1 * ct2 + st1 * st2 * np.cos(rule.phis[k1] - rule.phis[k2])
        cosd = min(1.0, max(-1.0, cosd))
        out.append(PairCorrelation(
            node_a=(i1, k1), node_b=(i2, k2), distance=float(np.arccos(cosd)),
            corr=corr, std_error=se, predicted=float(rho_tilde(profile, cosd))))
    return out


def write_field(f: FieldOnGrid, path):
    """Binary dump: little-endian header (magic, version, j, n_theta, n_phi)
    followed by float64 node values in ring-major order."""
    header = struct.pack("<4sIIII", _MAGIC, _VERSION, f.j,
                         f.rule.n_theta, f.rule.n_phi)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(f.values.astype("<f8").tobytes())


def read_field(path):
    """Read a field dump; returns (j, values) with values (n_theta, n_phi)."""
    with open(path, "rb") as fh:
        header = fh.read(20)
        magic, version, j, n_theta, n_phi = struct.unpack("<4sIIII", header)
        if magic != _MAGIC:
            raise ValueError("not a field dump")
        if version != _VERSION:
            raise ValueError(f"unsupported version {version}")
        data = np.frombuffer(fh.read(8 * n_theta * n_phi), dtype="<f8")
    return j, data.reshape(n_theta, n_phi).copy()
