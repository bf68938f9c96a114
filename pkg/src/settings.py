"""Configurações numéricas do oráculo e da execução em lote."""

import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional

from dotenv import load_dotenv


class SettingsError(ValueError):
    """Valor de configuração fora da faixa aceita."""

    code = "INVALID_SETTING"


# Variáveis de ambiente reconhecidas -> campo correspondente
ENV_OVERRIDES = {
    "DEFICIENCY_REL_TOL": "rel_tol",
    "DEFICIENCY_RMAX": "r_max",
    "DEFICIENCY_BOUNDARY_BAND": "boundary_band",
}

ENV_JOBS = "DEFICIENCY_JOBS"


@dataclass(frozen=True)
class OracleSettings:
    """Parâmetros do oráculo de Weyl.

    Attributes:
        r_min: menor raio integrado perto da singularidade.
        r_mid: raio de partida das duas integrações (para 0 e para o infinito).
        r_max: raio final da integração para o infinito.
        rel_tol: tolerância relativa por passo do integrador.
        boundary_band: faixa |nu² - 1| declarada inconclusiva sem integrar.
        exponent_margin: zona morta do voto por expoente em torno de -1/2.
        fit_r_max: maior raio usado na regressão do expoente perto de 0.
        samples_per_decade: amostras densas por década no lado de 0.
        samples_per_unit: amostras densas por unidade de comprimento no lado do infinito.
        series_tol: tolerância relativa do truncamento da série de Frobenius.
    """

    r_min: float = 1e-8
    r_mid: float = 1.0
    r_max: float = 40.0
    rel_tol: float = 1e-10
    boundary_band: float = 1e-2
    exponent_margin: float = 2e-3
    fit_r_max: float = 1e-4
    samples_per_decade: int = 32
    samples_per_unit: int = 8
    series_tol: float = 1e-10

    def __post_init__(self):
        if not 1e-13 <= self.rel_tol <= 1e-3:
            raise SettingsError(f"rel_tol deve estar em [1e-13, 1e-3], recebido {self.rel_tol}")
        if not 0 < self.r_min < self.fit_r_max < self.r_mid < self.r_max:
            raise SettingsError(
                "raios devem satisfazer 0 < r_min < fit_r_max < r_mid < r_max "
                f"(recebido {self.r_min}, {self.fit_r_max}, {self.r_mid}, {self.r_max})"
            )
        if self.boundary_band < 0 or self.exponent_margin < 0:
            raise SettingsError("boundary_band e exponent_margin não podem ser negativos")
        if self.samples_per_decade < 8 or self.samples_per_unit < 1:
            raise SettingsError("amostragem densa insuficiente")

    def with_overrides(self, **overrides: Any) -> "OracleSettings":
        """Retorna uma cópia com os valores não nulos substituídos."""
        known = {f.name for f in fields(self)}
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(changes) - known
        if unknown:
            raise SettingsError(f"parâmetros desconhecidos: {sorted(unknown)}")
        return replace(self, **changes)

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "OracleSettings":
        """Carrega os padrões e aplica as variáveis de ambiente (inclusive de um .env)."""
        load_dotenv(dotenv_path)
        overrides: Dict[str, float] = {}
        for variable, name in ENV_OVERRIDES.items():
            raw = os.environ.get(variable)
            if raw is None or raw.strip() == "":
                continue
            try:
                overrides[name] = float(raw)
            except ValueError:
                raise SettingsError(f"{variable}={raw!r} não é um número") from None
        return cls().with_overrides(**overrides)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def jobs_from_env(default: int = 1) -> int:
    """Grau de paralelismo padrão vindo de DEFICIENCY_JOBS."""
    load_dotenv()
    raw = os.environ.get(ENV_JOBS)
    if not raw:
        return default
    try:
        jobs = int(raw)
    except ValueError:
        raise SettingsError(f"{ENV_JOBS}={raw!r} não é inteiro") from None
    if jobs < 1:
        raise SettingsError(f"{ENV_JOBS} deve ser >= 1")
    return jobs
