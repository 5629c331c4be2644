"""Run ledger: SQLAlchemy models and operations for experiment runs."""
from .database_manager import DatabaseManager
from .models import Base, ExperimentRun

__all__ = ['Base', 'DatabaseManager', 'ExperimentRun']
