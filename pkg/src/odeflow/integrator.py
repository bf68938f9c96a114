"""Integração adaptativa de u'' = c(r) u com coeficientes complexos.

O passo é o par embutido de Cash-Karp 5(4) com controle PI; a saída densa vem de
interpolação de Hermite cúbica dentro de cada passo aceito.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

State = Tuple[complex, complex]

# Limiar de renormalização: |u| acima disso divide (u, u') pelo próprio |u|
RENORMALIZATION_THRESHOLD = 1e100
# Passo mínimo relativo ao comprimento do intervalo
MIN_STEP_FRACTION = 1e-14
# Teto de passos (aceitos + rejeitados) por integração
MAX_STEPS = 200_000

# Tabela de Butcher estendida de Cash-Karp (linha i monta o estágio i + 1)
EVAL_STAGES = [0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8]
BT = {
    0: [1 / 5],
    1: [3 / 40, 9 / 40],
    2: [3 / 10, -9 / 10, 6 / 5],
    3: [-11 / 54, 5 / 2, -70 / 27, 35 / 27],
    4: [1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096],
    5: [37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771],
}
# Diferença entre as soluções de 5a e 4a ordem (estimativa do erro local)
TR = [-277 / 64512, 0.0, 6925 / 370944, -6925 / 202752, -277 / 14336, 277 / 7084]

# Controlador PI (expoentes divididos pela ordem do estimador + 1)
SAFETY = 0.9
PI_ALPHA = 0.7 / 5
PI_BETA = 0.4 / 5
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


class IntegrationError(RuntimeError):
    code = "INTEGRATION_FAILURE"


class StepCollapseError(IntegrationError):
    code = "STEP_COLLAPSE"


class DomainViolationError(IntegrationError):
    code = "DOMAIN_VIOLATION"


@dataclass(frozen=True)
class LinearODE:
    """Equação u'' = c(r) u no intervalo (a, b), 0 < a < b.

    `inverse_square` declara que c(r) = inverse_square / r² + (termo regular), o que
    habilita a substituição t = ln r perto de 0.
    """

    coefficient: Callable[[float], complex]
    domain: Tuple[float, float] = (0.0, math.inf)
    inverse_square: Optional[float] = None

    def contains(self, r: float) -> bool:
        a, b = self.domain
        return a <= r <= b and r > 0


@dataclass
class Trajectory:
    """Amostras (r, u, u') de uma solução, na escala local.

    O valor verdadeiro é a amostra vezes 10**log_scale; `ledger` registra cada
    renormalização como (r, fator).
    """

    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    log_scale: np.ndarray
    ledger: List[Tuple[float, float]] = field(default_factory=list)
    stats: Dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.r)

    @property
    def final_state(self) -> State:
        return complex(self.u[-1]), complex(self.du[-1])

    def log_abs_u(self) -> np.ndarray:
        """ln|u| na escala verdadeira."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.u)) + self.log_scale * math.log(10.0)

    def true_state(self) -> Tuple[np.ndarray, np.ndarray]:
        factor = 10.0 ** self.log_scale
        return self.u * factor, self.du * factor

    def to_csv(self, path: Union[str, Path]) -> None:
        """Exporta r, re_u, im_u, re_du, im_du, scale_exponent para gráficos externos."""
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["r", "re_u", "im_u", "re_du", "im_du", "scale_exponent"])
            for r, u, du, s in zip(self.r, self.u, self.du, self.log_scale):
                writer.writerow([repr(float(r)), repr(u.real), repr(u.imag),
                                 repr(du.real), repr(du.imag), repr(float(s))])


def _cash_karp_step(rhs, s, y, z, k0y, k0z, h):
    """Um passo de Cash-Karp; retorna (y5, z5, erro_y, erro_z)."""
    a1, a2, a3, a4, a5, b = BT[0], BT[1], BT[2], BT[3], BT[4], BT[5]
    c = EVAL_STAGES

    k1y, k1z = rhs(s + c[1] * h, y + h * a1[0] * k0y, z + h * a1[0] * k0z)
    k2y, k2z = rhs(s + c[2] * h,
                   y + h * (a2[0] * k0y + a2[1] * k1y),
                   z + h * (a2[0] * k0z + a2[1] * k1z))
    k3y, k3z = rhs(s + c[3] * h,
                   y + h * (a3[0] * k0y + a3[1] * k1y + a3[2] * k2y),
                   z + h * (a3[0] * k0z + a3[1] * k1z + a3[2] * k2z))
    k4y, k4z = rhs(s + c[4] * h,
                   y + h * (a4[0] * k0y + a4[1] * k1y + a4[2] * k2y + a4[3] * k3y),
                   z + h * (a4[0] * k0z + a4[1] * k1z + a4[2] * k2z + a4[3] * k3z))
    k5y, k5z = rhs(s + c[5] * h,
                   y + h * (a5[0] * k0y + a5[1] * k1y + a5[2] * k2y + a5[3] * k3y + a5[4] * k4y),
                   z + h * (a5[0] * k0z + a5[1] * k1z + a5[2] * k2z + a5[3] * k3z + a5[4] * k4z))

    y5 = y + h * (b[0] * k0y + b[2] * k2y + b[3] * k3y + b[5] * k5y)
    z5 = z + h * (b[0] * k0z + b[2] * k2z + b[3] * k3z + b[5] * k5z)
    ey = h * (TR[0] * k0y + TR[2] * k2y + TR[3] * k3y + TR[4] * k4y + TR[5] * k5y)
    ez = h * (TR[0] * k0z + TR[2] * k2z + TR[3] * k3z + TR[4] * k4z + TR[5] * k5z)
    return y5, z5, ey, ez


def _hermite(theta, h, y0, f0, y1, f1):
    t2 = theta * theta
    t3 = t2 * theta
    return ((2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h * f0
            + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * f1)


def _run(rhs, s_a: float, state: State, s_b: float, rel_tol: float,
         sample_points: np.ndarray, to_physical, max_steps: int = MAX_STEPS) -> Trajectory:
    """Laço adaptativo genérico sobre a variável independente s."""
    span = s_b - s_a
    direction = 1.0 if span > 0 else -1.0
    min_step = MIN_STEP_FRACTION * abs(span)

    y, z = complex(state[0]), complex(state[1])
    s = s_a
    log_scale = 0.0
    k0y, k0z = rhs(s, y, z)
    evaluations = 1

    h = direction * min(abs(span) / 10.0, 0.05)
    err_prev = 1.0
    accepted = rejected = 0
    smallest, largest = math.inf, 0.0

    out_s, out_y, out_z, out_scale = [], [], [], []
    ledger = []
    next_sample = 0
    # amostras que coincidem com o ponto inicial
    while next_sample < len(sample_points) and (sample_points[next_sample] - s) * direction <= 0:
        out_s.append(sample_points[next_sample])
        out_y.append(y)
        out_z.append(z)
        out_scale.append(log_scale)
        next_sample += 1

    while (s_b - s) * direction > 0:
        if (s + h - s_b) * direction > 0:
            h = s_b - s
        if abs(h) < min_step:
            raise StepCollapseError(f"passo {abs(h):.3e} abaixo do mínimo em s = {s:.6g}")
        if accepted + rejected >= max_steps:
            raise StepCollapseError(
                f"{max_steps} passos sem alcançar o fim; último passo {abs(h):.3e} em r = {to_physical(s):.6g}"
            )

        y5, z5, ey, ez = _cash_karp_step(rhs, s, y, z, k0y, k0z, h)
        evaluations += 5
        scale = rel_tol * max(abs(y), abs(z), abs(y5), abs(z5)) + 1e-300
        err = max(abs(ey), abs(ez)) / scale
        if not math.isfinite(err):
            err = math.inf

        if err <= 1.0:
            s_new = s_b if (s + h - s_b) * direction >= 0 else s + h
            k1y, k1z = rhs(s_new, y5, z5)
            evaluations += 1

            while next_sample < len(sample_points) and (sample_points[next_sample] - s_new) * direction <= 0:
                theta = (sample_points[next_sample] - s) / h
                out_s.append(sample_points[next_sample])
                out_y.append(_hermite(theta, h, y, k0y, y5, k1y))
                out_z.append(_hermite(theta, h, z, k0z, z5, k1z))
                out_scale.append(log_scale)
                next_sample += 1

            accepted += 1
            smallest, largest = min(smallest, abs(h)), max(largest, abs(h))
            s, y, z, k0y, k0z = s_new, y5, z5, k1y, k1z

            magnitude = abs(y)
            if magnitude > RENORMALIZATION_THRESHOLD:
                y, z, k0y, k0z = y / magnitude, z / magnitude, k0y / magnitude, k0z / magnitude
                log_scale += math.log10(magnitude)
                ledger.append((to_physical(s), magnitude))
                logger.debug("renormalização em r = %.6g por %.3e", to_physical(s), magnitude)

            factor = SAFETY * max(err, 1e-10) ** -PI_ALPHA * err_prev ** PI_BETA
            h *= min(MAX_FACTOR, max(MIN_FACTOR, factor))
            err_prev = max(err, 1e-4)
        else:
            rejected += 1
            h *= max(MIN_FACTOR, SAFETY * err ** (-1 / 5)) if math.isfinite(err) else MIN_FACTOR

    stats = {
        "accepted": accepted,
        "rejected": rejected,
        "evaluations": evaluations,
        "min_step": smallest if accepted else 0.0,
        "max_step": largest,
        "final_log_scale": log_scale,
    }
    out_s = np.asarray(out_s, dtype=float)
    r, u, du = to_physical(out_s), np.asarray(out_y, dtype=complex), np.asarray(out_z, dtype=complex)
    return Trajectory(r, u, du, np.asarray(out_scale, dtype=float), ledger, stats)


def integrate(ode: LinearODE, r_a: float, state: State, r_b: float,
              rel_tol: float = 1e-10, sample_points: Optional[Sequence[float]] = None,
              n_samples: int = 257, max_steps: int = MAX_STEPS) -> Trajectory:
    """Integra u'' = c(r) u de r_a até r_b (qualquer sentido).

    Args:
        ode: equação e domínio.
        state: (u, u') em r_a.
        rel_tol: erro local relativo admitido por passo, em [1e-13, 1e-3].
        sample_points: raios onde amostrar; por padrão n_samples pontos igualmente espaçados.

    Raises:
        DomainViolationError: r_a ou r_b fora do domínio.
        StepCollapseError: passo abaixo de 1e-14 |r_b - r_a| ou mais de max_steps passos.
    """
    _check_interval(ode, r_a, r_b, rel_tol)
    if sample_points is None:
        sample_points = np.linspace(r_a, r_b, max(2, n_samples))
    coefficient = ode.coefficient

    def rhs(r, u, du):
        return du, coefficient(r) * u

    return _run(rhs, r_a, state, r_b, rel_tol, np.asarray(sample_points, dtype=float), lambda s: s, max_steps)


def log_transform_integrate(ode: LinearODE, r_a: float, state: State, r_b: float,
                            rel_tol: float = 1e-10, samples_per_decade: int = 32,
                            max_steps: int = MAX_STEPS) -> Trajectory:
    """Integra em t = ln r, onde (nu² - 1/4)/r² vira um coeficiente constante.

    Com y(t) = u(e^t) e w = dy/dt = r u', a equação fica y'' = y' + r² c(r) y. As
    amostras ficam igualmente espaçadas em ln r (samples_per_decade por década).
    """
    _check_interval(ode, r_a, r_b, rel_tol)
    if ode.inverse_square is None:
        raise DomainViolationError("a transformação logarítmica exige o termo 1/r² declarado")
    coefficient = ode.coefficient
    exp = math.exp

    def rhs(t, y, w):
        r = exp(t)
        return w, w + r * r * coefficient(r) * y

    t_a, t_b = math.log(r_a), math.log(r_b)
    # o 1e-9 evita um intervalo extra quando o número de décadas é inteiro
    count = max(2, int(math.ceil(abs(t_b - t_a) / math.log(10.0) * samples_per_decade - 1e-9)) + 1)
    samples = np.linspace(t_a, t_b, count)
    u0, du0 = complex(state[0]), complex(state[1])

    traj = _run(rhs, t_a, (u0, r_a * du0), t_b, rel_tol, samples, np.exp, max_steps)
    traj.du = traj.du / traj.r
    _sync_final(traj, r_b)
    return traj


def wronskian(first: Trajectory, second: Trajectory) -> np.ndarray:
    """u1 u2' - u2 u1' na escala verdadeira, amostra a amostra."""
    if len(first) != len(second) or not np.allclose(first.r, second.r, rtol=1e-12, atol=0):
        raise ValueError("trajetórias com amostras diferentes")
    scale = 10.0 ** (first.log_scale + second.log_scale)
    return (first.u * second.du - second.u * first.du) * scale


def wronskian_drift(first: Trajectory, second: Trajectory) -> float:
    """Maior desvio do wronskiano em relação ao valor inicial, relativo aos termos do produto."""
    w = wronskian(first, second)
    scale = 10.0 ** (first.log_scale + second.log_scale)
    magnitude = (np.abs(first.u * second.du) + np.abs(second.u * first.du)) * scale
    return float(np.max(np.abs(w - w[0]) / np.maximum(magnitude, 1e-300)))


def _check_interval(ode: LinearODE, r_a: float, r_b: float, rel_tol: float) -> None:
    if not (ode.contains(r_a) and ode.contains(r_b)):
        raise DomainViolationError(f"[{r_a}, {r_b}] fora do domínio {ode.domain}")
    if r_a == r_b:
        raise DomainViolationError("intervalo de integração vazio")
    if not 1e-13 <= rel_tol <= 1e-3:
        raise ValueError(f"rel_tol fora de [1e-13, 1e-3]: {rel_tol}")


def _sync_final(traj: Trajectory, r_b: float) -> None:
    # a última amostra é exatamente o ponto final
    if len(traj.r):
        traj.r[-1] = r_b
