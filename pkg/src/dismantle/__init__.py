"""Network dismantling: hierarchical spectral edge attacks and baselines."""
from .benchmark import CfeReport, StrategyResult, make_plan, run_benchmark
from .config import RunConfig, StrategySpec, child_seed
from .epidemics import SirParams, SirTrace, sir_ensemble, sir_run
from .errors import ConfigError, DataError, DismantleError, NumericalError
from .evaluation import GccCurve, absolute_gap, average_curves, cfe, execute_plan, improvement
from .generators import GenSpec, build, gen_er, gen_sbm, gen_sf, table_network
from .graph import Graph, connected_components, gcc_fraction, remove_edges, remove_node
from .io import extract_gcc, load_edge_list, write_edge_list
from .plan import RemovalPlan, node_order_plan
from .spectral import PartitionTree, SpectralConfig, hpi_ncut, ncut_value, power_iteration, spectral_bisection

__version__ = "0.1.0"
