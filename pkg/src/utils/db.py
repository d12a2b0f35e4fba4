"""SQLite ledger of bound runs."""

import json
import logging
import sqlite3
import uuid
from datetime import datetime
from pathlib import Path

logger = logging.getLogger(__name__)


def get_db_path(config: dict) -> Path:
    """Get database path from config."""
    db_path = Path(config["database"]["path"])
    db_path.parent.mkdir(parents=True, exist_ok=True)
    return db_path


def init_database(config: dict) -> None:
    """Create the run ledger table if it does not exist."""
    db_path = get_db_path(config)
    logger.debug(f"Initializing run ledger at {db_path}")

    conn = sqlite3.connect(str(db_path))
    cursor = conn.cursor()
    cursor.execute("""
        CREATE TABLE IF NOT EXISTS bound_runs (
            run_id TEXT PRIMARY KEY,
            timestamp TEXT DEFAULT CURRENT_TIMESTAMP,
            command TEXT NOT NULL,
            family TEXT,
            sense TEXT,
            bound REAL,
            gap REAL,
            iterations INTEGER,
            converged INTEGER,
            problem TEXT
        )
    """)
    conn.commit()
    conn.close()


def get_connection(config: dict) -> sqlite3.Connection:
    """Get a connection to the database."""
    db_path = get_db_path(config)
    return sqlite3.connect(str(db_path))


def record_run(config: dict, command: str, problem: dict, result) -> str:
    """
    Append one solve to the ledger and return its run id.

    ``result`` is a BoundResult; ``problem`` the problem document that produced it.
    """
    init_database(config)
    run_id = datetime.now().strftime("%Y%m%d_%H%M%S_") + uuid.uuid4().hex[:8]
    conn = get_connection(config)
    conn.execute(
        (
            "INSERT INTO bound_runs "
            "(run_id, command, family, sense, bound, gap, iterations, converged, problem) "
            "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)"
        ),
        (
            run_id,
            command,
            str(result.family),
            result.sense.value,
            float(result.bound),
            float(result.gap),
            int(result.iterations),
            int(result.converged),
            json.dumps(problem),
        ),
    )
    conn.commit()
    conn.close()
    logger.debug(f"Recorded run {run_id}")
    return run_id
