"""
Painel de índices de deficiência - fluxos magnéticos pontuais
Aplicação principal com interface Streamlit
"""

import json
from pathlib import Path
from typing import Any, Dict, List

import streamlit as st

from src.calculus import total_index
from src.model import ConfigurationError, build_configuration, serialize_index, validate_configuration
from src.settings import OracleSettings, SettingsError
from src.weyl import WeylOracle

CONFIGS_PATH = Path(__file__).parent / "resources" / "configs"

# Configuração da página
st.set_page_config(
    page_title="Índices de Deficiência",
    page_icon="🧲",
    layout="wide",
    initial_sidebar_state="expanded"
)

# CSS customizado
st.markdown("""
<style>
    .main-header {
        text-align: center;
        padding: 1rem;
        background: linear-gradient(90deg, #1f77b4, #ff7f0e);
        color: white;
        border-radius: 10px;
        margin-bottom: 2rem;
    }
</style>
""", unsafe_allow_html=True)


def initialize_session_state():
    """Inicializa variáveis da sessão."""

    if 'raw_config' not in st.session_state:
        st.session_state.raw_config = None
        st.session_state.config_name = None
        st.session_state.oracle_results = []


def sample_configs() -> Dict[str, Path]:
    return {path.stem: path for path in sorted(CONFIGS_PATH.glob("*.json"))}


def render_sidebar() -> OracleSettings:
    """Escolha da configuração e parâmetros do oráculo."""

    st.sidebar.header("📂 Configuração")
    samples = sample_configs()
    choice = st.sidebar.selectbox("Exemplo:", list(samples), index=0 if samples else None)
    uploaded = st.sidebar.file_uploader("Ou envie um JSON:", type=["json"])

    try:
        if uploaded is not None:
            name, raw = uploaded.name, json.loads(uploaded.getvalue().decode("utf-8"))
        elif choice is not None:
            name, raw = choice, json.loads(samples[choice].read_text(encoding="utf-8"))
        else:
            name, raw = None, None
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        st.sidebar.error(f"❌ JSON inválido: {e}")
        name, raw = None, None

    if name != st.session_state.config_name:
        st.session_state.config_name = name
        st.session_state.raw_config = raw
        st.session_state.oracle_results = []

    if isinstance(st.session_state.raw_config, dict):
        background = st.session_state.raw_config.get("background_index", 0)
        infinite = st.sidebar.checkbox("n0 infinito", value=background == "infinite")
        if not infinite:
            current = background if isinstance(background, int) else 0
            background = int(st.sidebar.number_input("n0 (índice de fundo)", min_value=0, value=current))
        st.session_state.raw_config = {**st.session_state.raw_config,
                                       "background_index": "infinite" if infinite else background}

    st.sidebar.header("⚙️ Oráculo")
    exponent = st.sidebar.slider("log10(rel_tol)", min_value=-12, max_value=-6, value=-10)
    r_max = st.sidebar.slider("R_max", min_value=20.0, max_value=80.0, value=40.0, step=5.0)
    band = st.sidebar.select_slider("Faixa de fronteira", options=[1e-3, 5e-3, 1e-2, 2e-2], value=1e-2)
    try:
        return OracleSettings().with_overrides(rel_tol=10.0 ** exponent, r_max=r_max, boundary_band=band)
    except SettingsError as e:
        st.sidebar.error(f"❌ {e}")
        return OracleSettings()


def render_violations(raw: Any) -> bool:
    """Mostra as hipóteses violadas; retorna True se a configuração é válida."""

    try:
        report = validate_configuration(raw)
    except ConfigurationError as e:
        st.error(f"❌ {e.code}: {e}")
        return False

    for v in report.violations:
        st.error(f"❌ {v.rule} · {v.code} · {v.singularity_id or '-'}: {v.message}")
    if report.ok:
        st.caption(f"Corte δ = {report.delta:g} (separação mínima respeitada)")
    return report.ok


def render_report(raw: Any):
    """Tabela por singularidade e métricas do teorema da soma."""

    config = build_configuration(raw)
    report = total_index(config)
    counts = report.class_counts

    col1, col2, col3, col4, col5 = st.columns(5)
    with col1:
        st.metric("n± total", serialize_index(report.total))
    with col2:
        st.metric("|J2|", counts["J2"])
    with col3:
        st.metric("|J1|", counts["J1"])
    with col4:
        st.metric("|Y|", counts["Y"])
    with col5:
        st.metric("Interações pontuais", counts["POINT_INTERACTION"])

    rows: List[Dict[str, Any]] = []
    for s, entry in zip(config.singularities, report.per_singularity):
        rows.append({
            "id": s.id, "x": s.x, "y": s.y, "α": s.alpha, "p": s.p, "q": s.q,
            "classe": entry.klass.value, "índice": entry.index,
            "harmônicos": ", ".join(str(ell) for ell in entry.harmonics) or "-",
        })
    st.dataframe(rows, use_container_width=True)

    if report.self_adjoint:
        st.success("✅ Índices nulos: o operador mínimo é essencialmente autoadjunto.")
    else:
        st.info("ℹ️ n+ = n-: existem extensões autoadjuntas (incluindo a de Friedrichs).")

    with st.expander("🧾 Relatório JSON"):
        st.json(report.to_dict())
    return config


def render_oracle(config, settings: OracleSettings):
    """Botão que roda o oráculo de Weyl com λ = ±i em cada singularidade."""

    st.subheader("🔬 Oráculo numérico")
    if st.button("Verificar com oráculo"):
        oracle = WeylOracle(settings)
        results = []
        progress_bar = st.progress(0)
        for k, s in enumerate(config.singularities):
            with st.spinner(f"Integrando harmônicos de {s.id}..."):
                results.append(oracle.verify_singularity(s).to_dict())
            progress_bar.progress((k + 1) / len(config))
        progress_bar.empty()
        st.session_state.oracle_results = results

    for result in st.session_state.oracle_results:
        plus, minus = result["results"]
        label = f"{result['id']}: +i → {plus['total']}, -i → {minus['total']}, fórmula → {plus['closed_form']}"
        if result["status"] == "agree":
            st.success(f"✅ {label}")
        elif result["status"] == "boundary-inconclusive":
            st.warning(f"⚠️ {label} (faixa de fronteira)")
        else:
            st.error(f"❌ {label} ({result['status']})")


def main():
    """Função principal da aplicação."""

    initialize_session_state()
    settings = render_sidebar()

    st.markdown("""
    <div class="main-header">
        <h1>🧲 Índices de Deficiência</h1>
        <p><em>Operadores de Schrödinger com fluxos magnéticos pontuais</em></p>
    </div>
    """, unsafe_allow_html=True)

    raw = st.session_state.raw_config
    if raw is None:
        st.info("Escolha um exemplo ou envie uma configuração JSON.")
        return

    if render_violations(raw):
        config = render_report(raw)
        if len(config):
            render_oracle(config, settings)


if __name__ == "__main__":
    main()
