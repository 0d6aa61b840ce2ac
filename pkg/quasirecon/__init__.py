from quasirecon.analytic import evolve_closed, rho1, rho2, sigma_x_closed  # noqa: F401
from quasirecon.config import ScenarioConfig, load_config, parse_config  # noqa: F401
from quasirecon.fock import coherent_state, displacement, fock_state  # noqa: F401
from quasirecon.fock import thermal_state, vacuum  # noqa: F401
from quasirecon.oracle import Integrator, evolve_rk4  # noqa: F401
from quasirecon.params import IntegratorConfig, ModelParams  # noqa: F401
from quasirecon.protocol import Engine, find_measurement_time  # noqa: F401
from quasirecon.protocol import reconstruct_grid, reconstruct_point  # noqa: F401
from quasirecon.quasiprobability import PhaseGrid, QpdConvention  # noqa: F401
from quasirecon.quasiprobability import qpd_direct, qpd_grid  # noqa: F401

params = ModelParams
schedule = find_measurement_time
