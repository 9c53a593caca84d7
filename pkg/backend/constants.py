from typing import Final

# Environment variables
LOG_LEVEL_ENV_VAR: Final[str] = "SR_LOG_LEVEL"
LOG_DIR_ENV_VAR: Final[str] = "SR_LOG_DIR"
DATABASE_URL_ENV_VAR: Final[str] = "SR_DATABASE_URL"
WORKERS_ENV_VAR: Final[str] = "SR_WORKERS"
DEFAULT_DATABASE_URL: Final[str] = "sqlite:///spatial_reuse.db"
DEFAULT_LOG_DIR: Final[str] = "logs"

# Errors
class InputValidationError(Exception):
    """Custom exception for input validation errors"""
    pass

class ScenarioValidationError(InputValidationError):
    """Scenario or action-space content violates an invariant"""

    def __init__(self, message: str, field_path: str = ""):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}" if field_path else message)

class ConfigurationError(InputValidationError):
    """Experiment configuration cannot be run as given"""
    pass

class SimulationError(Exception):
    """Runtime failure inside a drop"""
    pass

# Radio defaults (5 GHz, 20 MHz, single stream)
CARRIER_FREQ_GHZ: Final[float] = 5.0
BANDWIDTH_MHZ: Final[float] = 20.0
GUARD_INTERVAL_US: Final[float] = 3.2
NOISE_DBM: Final[float] = -95.0
DEFAULT_TX_POWER_DBM: Final[float] = 20.0
DEFAULT_CCA_DBM: Final[float] = -82.0
SPATIAL_STREAMS: Final[int] = 1
TX_GAIN_DBI: Final[float] = 0.0
RX_GAIN_DBI: Final[float] = 0.0
CAPTURE_THRESHOLD_DB: Final[float] = 10.0
PL0_DB: Final[float] = 5.0
PATHLOSS_EXPONENT: Final[float] = 4.4
SHADOWING_DB: Final[float] = 9.5
OBSTACLES_DB: Final[float] = 30.0

# OFDM rate identity at 20 MHz
DATA_SUBCARRIERS_20MHZ: Final[int] = 234
T_DFT_US: Final[float] = 12.8
SUPPORTED_BANDWIDTHS_MHZ: Final[tuple[float, ...]] = (20.0,)

# 802.11ax minimum sensitivities (-82..-52 dBm) over a -95 dBm floor
MCS_SINR_THRESHOLDS_DB: Final[tuple[float, ...]] = (13, 16, 18, 21, 25, 29, 30, 31, 36, 38, 41, 43)
MCS_BITS_PER_SUBCARRIER: Final[tuple[int, ...]] = (1, 2, 2, 4, 4, 6, 6, 6, 8, 8, 10, 10)
MCS_CODING_RATES: Final[tuple[float, ...]] = (1 / 2, 1 / 2, 3 / 4, 1 / 2, 3 / 4, 2 / 3, 3 / 4, 5 / 6, 3 / 4, 5 / 6, 3 / 4, 5 / 6)

# MAC defaults
TXOP_LIMIT_US: Final[float] = 5484.0
AMPDU_MAX: Final[int] = 64
DATA_LEN_BYTES: Final[int] = 1500
CW0: Final[int] = 16
CWE_MIN: Final[int] = 1
CWE_MAX: Final[int] = 5
SLOT_US: Final[float] = 9.0
OVERHEAD_US_PER_TXOP: Final[float] = 100.0

# Action levels
PD_LEVELS_DBM: Final[tuple[float, ...]] = (-72.0, -82.0)
TX_POWER_LEVELS_DBM: Final[tuple[float, ...]] = (10.0, 20.0)

# Grid drops
GRID_ROWS: Final[int] = 3
GRID_COLS: Final[int] = 3
GRID_SIDE_M: Final[float] = 20.0
COVERAGE_DIAMETER_M: Final[float] = 3.0
FREQ_REUSE: Final[int] = 3
GRID_DROPS: Final[int] = 20

# Learning
EPS0: Final[float] = 0.1
# rounds of shuffled plays over all arms before the epsilon schedule takes over
EPS_WARMUP_ROUNDS: Final[int] = 30
PF_FLOOR: Final[float] = 1e-6
SIM_TIME_S: Final[float] = 300.0
DELTA_S: Final[float] = 0.5
LAST_WINDOW_FRAC: Final[float] = 0.25
TRANSITORY_FRAC: Final[float] = 1 / 3
ISOLATION_ITERATIONS: Final[int] = 4
ISOLATION_SEED: Final[int] = 0
MAX_PAYOFF_PROFILES: Final[int] = 4096

# Strategies
STRATEGY_EGREEDY: Final[str] = "egreedy"
STRATEGY_THOMPSON: Final[str] = "thompson"
STRATEGY_STATIC_OBSSPD: Final[str] = "static-obsspd"
STRATEGY_STATIC_DCF: Final[str] = "static-dcf"
STATIC_OBSSPD_ACTION: Final[tuple[float, float]] = (20.0, -72.0)
STATIC_DCF_ACTION: Final[tuple[float, float]] = (20.0, -82.0)

# Environments
ENV_MATRIX: Final[str] = "matrix"
ENV_OBSS: Final[str] = "obss"

# Output files
TRACE_COLUMNS: Final[tuple[str, ...]] = (
    "drop", "iter", "agent", "action", "reward",
    "throughput_mbps", "airtime_frac", "delay_ms", "nav_frac",
)
TRACE_FILE: Final[str] = "trace.csv"
SUMMARY_FILE: Final[str] = "summary.csv"
ACTIONS_FILE: Final[str] = "actions.csv"
TIMELINE_FILE: Final[str] = "timeline.csv"
DROPS_FILE: Final[str] = "drops.csv"
MANIFEST_FILE: Final[str] = "manifest.json"
SWEEP_FILE: Final[str] = "sweep.csv"
