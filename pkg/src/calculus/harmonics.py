"""Regra por harmônico angular: nu² = (l + alpha)² + p e índice 1 sse nu² < 1."""

import math
from typing import List, Tuple

# Tolerância para reconhecer fluxo inteiro na parte fracionária
INTEGER_FLUX_TOL = 1e-12
# Folga aplicada à janela [ceil(-alpha-1), floor(-alpha+1)]
WINDOW_MARGIN = 2


def reduced_flux(alpha: float) -> Tuple[float, bool]:
    """Parte fracionária alpha - floor(alpha) em [0, 1) e se o fluxo é inteiro.

    Quando a parte fracionária está a INTEGER_FLUX_TOL de 0 ou de 1 o fluxo é
    tratado como inteiro e a parte fracionária volta 0.0.
    """
    fractional = alpha - math.floor(alpha)
    if abs(fractional) <= INTEGER_FLUX_TOL or abs(fractional - 1.0) <= INTEGER_FLUX_TOL:
        return 0.0, True
    return fractional, False


def effective_flux(alpha: float) -> float:
    """Fluxo usado nas contas: arredondado ao inteiro quando reduced_flux o reconhece."""
    _, is_integer = reduced_flux(alpha)
    return float(round(alpha)) if is_integer else alpha


def radial_coupling(ell: int, alpha: float, p: float) -> float:
    return (ell + alpha) ** 2 + p


def classify_harmonic(nu_squared: float, q: float = 0.0) -> int:
    """Índice de deficiência do operador radial: 1 se nu² ∈ [0, 1), senão 0.

    O termo de Coulomb q/r não altera o índice; `q` é aceito apenas para deixar
    isso explícito na assinatura.
    """
    return 1 if nu_squared < 1.0 else 0


def harmonic_window(alpha: float) -> range:
    """Harmônicos a examinar: fora de [ceil(-alpha-1), floor(-alpha+1)] vale (l+alpha)² >= 1."""
    alpha = effective_flux(alpha)
    low = math.ceil(-alpha - 1) - WINDOW_MARGIN
    high = math.floor(-alpha + 1) + WINDOW_MARGIN
    return range(low, high + 1)


def contributing_harmonics(alpha: float, p: float) -> List[int]:
    """Inteiros l (em ordem crescente) com (l + alpha)² + p < 1; no máximo dois."""
    alpha_eff = effective_flux(alpha)
    return [
        ell for ell in harmonic_window(alpha)
        if classify_harmonic(radial_coupling(ell, alpha_eff, p)) == 1
    ]
