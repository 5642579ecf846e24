"""RG flows, Luttinger-liquid relations and free-fermion baselines for the
1D extended Hubbard model at weak repulsive coupling away from half filling."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .scale_flow import (
    FlowSchedule,
    G1Trace,
    SectorDomain,
    average_coefficients,
    in_sector,
    run_g1_flow,
    step_g1,
    tilde_g,
)
from .hubbard_rg import (
    CouplingVector,
    HubbardFlowTrace,
    ModelInputs,
    fixed_point,
    g1_log_sum,
    g2_log_sum,
    init_couplings,
    leading_coefficient,
    run_flow,
    tune_nu,
)
from .renorm_flow import (
    CHANNELS,
    anomalous_exponent,
    q_coefficient,
    run_renorm,
    step_renorm,
)
from .effective_model import (
    Anomalies,
    EffectiveParams,
    ExponentSet,
    K_pair,
    X_table,
    anomaly_params,
    channel_velocities,
    density_correlation,
    eta_zeta,
    exponent_set,
    tune_to_hubbard,
    two_point,
)
from .observables import (
    BarredParams,
    ObservableSet,
    K_bar,
    barred_anomalies,
    barred_couplings,
    drude_hat,
    observables_for_hubbard,
    omega_c_hat,
    susceptibility_drude,
)
from .correlations import (
    AsymptoticContext,
    build_context,
    log_factor,
    omega_asymptotic,
    s2_asymptotic,
    spin_charge_two_point,
)
from .free_baseline import (
    LatticeSpec,
    fermi,
    propagator,
    response_c,
    susceptibility_lattice,
    ward_residual,
)
