"""Graph vulnerability and robustness toolkit.

Exact and approximate robustness measures, targeted attack strategies,
heuristic and Shield-value defenses, and discrete-time SIS/SIR and
cascading-failure simulators over undirected, unweighted simple graphs.
"""

__version__ = "0.1.0"

from .attacks import AttackStrategy, PerturbationTrace, curve_auc, run_attack, select_targets
from .defenses import (DefenseStrategy, MonitoredSet, apply_heuristic_defense,
                       netshield_select, run_defense, shield_value)
from .errors import (ContractError, ConvergenceError, DisconnectedGraphError, DomainError,
                     EdgeListParseError, FeasibilityError, ParameterError, RobustnetError)
from .graph import (GeneratorParams, Graph, generate_clustered_scale_free, generate_grid,
                    load_edge_list)
from .measures import (MEASURE_DIRECTIONS, BetweennessScores, MeasureResult, evaluate)
from .simulate import (CascadeConfig, CascadeState, SimulationTrace, SirConfig, SisConfig,
                       beta_for_strength, effective_strength, run_cascade, run_sir, run_sis,
                       sweep_cascade, sweep_sis, tail_mean_infected_fraction)
from .spectral import (SolverConfig, SpectrumResult, adjacency_spectrum, bottom_k_laplacian,
                       dense_symmetric_eigen, laplacian_spectrum, top_k_adjacency)
