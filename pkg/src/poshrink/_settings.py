import multiprocessing
import os
import typing as t

import dotenv
from pydantic import BaseSettings

PACKAGE_DIR = os.path.dirname(os.path.abspath(__file__))

dotenv.load_dotenv(dotenv_path=f"{PACKAGE_DIR}/.env")

ENV_TYPE = os.environ.get("ENVIRONMENT")


class AllEnvSettings(BaseSettings):
    # General
    ENVIRONMENT: str = os.environ.get("ENVIRONMENT")
    APP_VERSION: str = "0.1.0"
    PACKAGE_DIR = PACKAGE_DIR
    LOG_LEVEL: str = os.environ.get("POSHRINK_LOG_LEVEL", "info")
    THREADS: int = int(os.environ.get("POSHRINK_THREADS", multiprocessing.cpu_count()))
    DEFAULT_SEED: int = 20240607
    # F integral, Monte Carlo backend
    F_MC_SAMPLES: int = 100_000
    F_MC_MIN_SAMPLES: int = 1_000
    MEDIAN_OF_MEANS_BLOCKS: int = 10
    SMOOTHING_EPSILON_MC: float = 1e-6
    SMOOTHING_EPSILON_SENSITIVITY: float = 1e-4
    # F integral, quadrature backend
    QUADRATURE_REL_TOL: float = 1e-8
    QUADRATURE_U_MIN: float = -40.0
    QUADRATURE_U_MAX: float = 40.0
    QUADRATURE_LIMIT: int = 200
    # F cache
    F_CACHE_ENABLED: bool = True
    F_CACHE_MAX_ENTRIES: int = 1_000_000
    F_CACHE_T_DIGITS: int = 12
    # Priors
    SYMMETRIZATION_MAX_DIM: int = 25
    FD_STEP: float = 1e-3
    BOUNDARY_GRID: t.Tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    HYPOTHESIS_TOL: float = 1e-12
    ORTHONORMAL_TOL: float = 1e-10
    # Poisson sums and lattices
    POISSON_TAIL_SIGMAS: float = 12.0
    POISSON_TAIL_OFFSET: float = 30.0
    LATTICE_TAIL_MASS: float = 1e-10
    LATTICE_MAX_POINTS: int = 20_000
    ESTIMATOR_TAIL_MASS: float = 1e-12
    ESTIMATOR_MAX_POINTS: int = 1_000_000
    # Risk
    RISK_SAMPLES: int = 20_000
    RISK_CHUNK_SIZE: int = 5_000
    # Dominance conditions
    FINEQ_TOL_QUADRATURE: float = 1e-6
    FINEQ_SE_MULTIPLIER: float = 5.0
    FINEQ_MAX_Z_PER_DIM: int = 30
    # Experiments
    LAMBDA_GRID_MIN: float = 0.1
    LAMBDA_GRID_MAX: float = 10.0
    LAMBDA_GRID_POINTS: int = 20


class DevSettings(AllEnvSettings):
    LOG_LEVEL: str = "debug"


class ProductionSettings(AllEnvSettings):
    pass


class LocalSettings(AllEnvSettings):
    LOG_LEVEL: str = "debug"
    THREADS: int = 2


class TestSettings(AllEnvSettings):
    F_MC_SAMPLES: int = 20_000
    RISK_SAMPLES: int = 4_000
    RISK_CHUNK_SIZE: int = 1_000
    LAMBDA_GRID_POINTS: int = 5
