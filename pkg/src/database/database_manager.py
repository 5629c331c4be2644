"""
Database manager for the experiment run ledger.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd
from sqlalchemy import create_engine, func
from sqlalchemy.engine import make_url
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session, sessionmaker

from ..config import Config
from .models import Base, ExperimentRun

logger = logging.getLogger(__name__)

RUN_COLUMNS = [
    'id', 'command', 'seed', 'config_hash', 'status',
    'execution_time', 'error_message', 'summary', 'created_at',
]


class DatabaseManager:
    """Records CLI runs and reads them back as DataFrames."""

    def __init__(self, database_url: Optional[str] = None):
        self.database_url = database_url or Config.DATABASE_URL
        self._ensure_sqlite_directory()
        self.engine = create_engine(self.database_url, echo=Config.DEBUG)
        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)

    def _ensure_sqlite_directory(self):
        url = make_url(self.database_url)
        if url.get_backend_name() == 'sqlite' and url.database not in (None, '', ':memory:'):
            Path(url.database).parent.mkdir(parents=True, exist_ok=True)

    def create_tables(self):
        """Create all database tables."""
        try:
            Base.metadata.create_all(bind=self.engine)
            logger.info("Database tables created successfully")
        except SQLAlchemyError as e:
            logger.error(f"Error creating database tables: {e}")
            raise

    def get_session(self) -> Session:
        """Get a database session."""
        return self.SessionLocal()

    def log_run(
        self,
        command: str,
        seed: int,
        config_hash: str,
        config: Dict[str, Any],
        status: str = 'success',
        summary: Optional[Dict[str, Any]] = None,
        execution_time: Optional[float] = None,
        error_message: Optional[str] = None,
    ) -> int:
        """Store one run and return its id."""
        session = self.get_session()
        try:
            run = ExperimentRun(
                command=command,
                seed=str(seed),
                config_hash=config_hash,
                config=config,
                status=status,
                summary=summary,
                execution_time=execution_time,
                error_message=error_message,
            )
            session.add(run)
            session.commit()
            logger.info(f"Recorded {command} run {run.id} ({status})")
            return run.id
        except SQLAlchemyError as e:
            session.rollback()
            logger.error(f"Error logging run: {e}")
            raise
        finally:
            session.close()

    def get_runs(self, command: Optional[str] = None) -> pd.DataFrame:
        """Recorded runs, oldest first, optionally filtered by command."""
        session = self.get_session()
        try:
            query = session.query(ExperimentRun)
            if command is not None:
                query = query.filter(ExperimentRun.command == command)
            rows = [
                {column: getattr(run, column) for column in RUN_COLUMNS}
                for run in query.order_by(ExperimentRun.id).all()
            ]
            return pd.DataFrame(rows, columns=RUN_COLUMNS)
        except SQLAlchemyError as e:
            logger.error(f"Error getting runs: {e}")
            return pd.DataFrame(columns=RUN_COLUMNS)
        finally:
            session.close()

    def get_run_summary(self) -> Dict[str, Any]:
        """Run counts per command and per status."""
        session = self.get_session()
        try:
            by_command = dict(
                session.query(ExperimentRun.command, func.count(ExperimentRun.id))
                .group_by(ExperimentRun.command).all()
            )
            by_status = dict(
                session.query(ExperimentRun.status, func.count(ExperimentRun.id))
                .group_by(ExperimentRun.status).all()
            )
            return {
                'total_runs': sum(by_command.values()),
                'by_command': by_command,
                'by_status': by_status,
            }
        except SQLAlchemyError as e:
            logger.error(f"Error getting run summary: {e}")
            return {}
        finally:
            session.close()
