"""
Database models for the experiment run ledger.
"""
from datetime import datetime, timezone

from sqlalchemy import JSON, Column, DateTime, Float, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class ExperimentRun(Base):
    """One CLI invocation: what ran, with which seed and config, and how it ended."""

    __tablename__ = 'experiment_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    command = Column(String(50), nullable=False, index=True)  # simulate, test, detect, spsa, reproduce
    seed = Column(String(20), nullable=False)  # u64 does not fit a signed BIGINT
    config_hash = Column(String(64), nullable=False)  # sha256 hex
    config = Column(JSON, nullable=False)
    status = Column(String(20), nullable=False, default='success')
    summary = Column(JSON)
    execution_time = Column(Float)
    error_message = Column(Text)
    created_at = Column(DateTime, default=_utcnow)
