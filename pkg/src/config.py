"""
Configuration settings for the cognitive radar toolkit.
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Application configuration."""

    # Application Settings
    DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

    # Storage
    DATA_DIR = os.getenv('DATA_DIR', './data')
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', './outputs')
    DATABASE_URL = os.getenv('DATABASE_URL', 'sqlite:///./data/runs.db')

    # Reproducibility
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '0'))

    # Revealed preference tolerances
    GARP_TOL = float(os.getenv('GARP_TOL', '1e-9'))
    ACTIVITY_TOL = float(os.getenv('ACTIVITY_TOL', '1e-6'))

    # Riccati / eigen routines
    ARE_TOL = float(os.getenv('ARE_TOL', '1e-10'))
    ARE_MAX_ITER = int(os.getenv('ARE_MAX_ITER', '100000'))
    JACOBI_TOL = 1e-14
    SYMMETRY_TOL = 1e-10
    CONDITION_LIMIT = 1e12

    # Detector
    PHI_TOL = float(os.getenv('PHI_TOL', '1e-9'))
    MC_SAMPLES = int(os.getenv('MC_SAMPLES', '1000'))
    RESAMPLE_CAP = int(os.getenv('RESAMPLE_CAP', '200'))

    # Probe optimizer
    POSITIVITY_FLOOR = 1e-6

    @classmethod
    def validate(cls):
        """Validate numeric configuration."""
        for name in ('GARP_TOL', 'ACTIVITY_TOL', 'ARE_TOL', 'PHI_TOL'):
            if getattr(cls, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if cls.MC_SAMPLES < 1:
            raise ValueError("MC_SAMPLES must be at least 1")
        if cls.ARE_MAX_ITER < 1 or cls.RESAMPLE_CAP < 1:
            raise ValueError("iteration caps must be at least 1")
        return True
