"""Grigorchuk groups G_w, their wreath products and growth computations."""

from .errors import BudgetExceeded
from .grigorchuk import GElement, ball, element_norm, is_trivial, word_problem, wreath_split, zeta_tower
from .orbit import delta_growth, delta_realizer, inverted_orbit, sigma_growth
from .sequences import OmegaSeq, parse_omega_spec
from .simplex import SimplexPoint, cesaro_exponent, eta, eta_word, mu, weights
from .synthesis import preset_growth, synthesize_omega, verify_sandwich
from .wreath import AbelianSpec, WreathElement, ball_W, psi_split, witness_set

__all__ = [
    "AbelianSpec", "BudgetExceeded", "GElement", "OmegaSeq", "SimplexPoint", "WreathElement",
    "ball", "ball_W", "cesaro_exponent", "delta_growth", "delta_realizer", "element_norm", "eta", "eta_word",
    "inverted_orbit", "is_trivial", "mu", "parse_omega_spec", "preset_growth", "psi_split",
    "sigma_growth", "synthesize_omega", "verify_sandwich", "weights", "witness_set",
    "word_problem", "wreath_split", "zeta_tower",
]
__version__ = "0.1.0"
