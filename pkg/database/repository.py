import asyncio
import json
from contextlib import asynccontextmanager
from datetime import datetime
from typing import Any, Dict, List, Optional

import aiosqlite
from loguru import logger

from utils.config import Config
from utils.errors import ConfigError

MAX_CONNECTIONS = 5


class DatabaseConnectionPool:
    """Connection pool manager for the report archive"""
    _pool: List[aiosqlite.Connection] = []
    _in_use: set = set()
    _opening: int = 0
    _path: Optional[str] = None

    @classmethod
    async def close_all(cls):
        """Close all database connections"""
        for conn in cls._pool:
            try:
                await conn.close()
            except Exception as e:
                logger.error(f"Error closing connection: {e}")
        cls._pool.clear()
        cls._in_use.clear()
        cls._path = None

    @classmethod
    def _archive_path(cls) -> str:
        path = Config().run.archive_path
        if not path:
            raise ConfigError("no archive configured; pass --archive or set K3ML_DB_PATH")
        return path

    @classmethod
    @asynccontextmanager
    async def get_connection(cls):
        """Get a database connection from the pool"""
        path = cls._archive_path()
        if cls._path is not None and cls._path != path:
            await cls.close_all()
        cls._path = path

        while True:
            conn = next((c for c in cls._pool if id(c) not in cls._in_use), None)
            if conn is None and len(cls._pool) + cls._opening < MAX_CONNECTIONS:
                # connections still being opened count toward the limit
                cls._opening += 1
                try:
                    conn = await aiosqlite.connect(path)
                finally:
                    cls._opening -= 1
                conn.row_factory = aiosqlite.Row
                cls._pool.append(conn)
            if conn is not None:
                break
            await asyncio.sleep(0.1)

        cls._in_use.add(id(conn))
        try:
            yield conn
        finally:
            cls._in_use.discard(id(conn))


class Repository:
    """Archive of verification runs and their reports"""

    @staticmethod
    async def close_db() -> None:
        """Close all database connections"""
        await DatabaseConnectionPool.close_all()

    @staticmethod
    async def init_db() -> None:
        """Initialize database schema"""
        async with DatabaseConnectionPool.get_connection() as db:
            await db.executescript("""
                CREATE TABLE IF NOT EXISTS runs (
                    run_id TEXT PRIMARY KEY,
                    started_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    finished_at TIMESTAMP,
                    command TEXT NOT NULL,
                    config_json TEXT,
                    status TEXT DEFAULT 'running',
                    peak_rss_mb REAL
                );
                CREATE TABLE IF NOT EXISTS reports (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id TEXT NOT NULL REFERENCES runs(run_id),
                    check_id TEXT NOT NULL,
                    status TEXT NOT NULL,
                    payload_json TEXT NOT NULL,
                    runtime_ms INTEGER
                );
                CREATE INDEX IF NOT EXISTS idx_reports_run ON reports(run_id);
            """)
            await db.commit()

    @staticmethod
    async def start_run(run_id: str, command: str, config: Dict[str, Any]) -> None:
        async with DatabaseConnectionPool.get_connection() as db:
            await db.execute(
                "INSERT INTO runs (run_id, started_at, command, config_json) VALUES (?, ?, ?, ?)",
                (run_id, datetime.now().isoformat(timespec="seconds"), command, json.dumps(config, sort_keys=True)),
            )
            await db.commit()

    @staticmethod
    async def save_report(run_id: str, payload: Dict[str, Any]) -> None:
        async with DatabaseConnectionPool.get_connection() as db:
            await db.execute(
                "INSERT INTO reports (run_id, check_id, status, payload_json, runtime_ms) VALUES (?, ?, ?, ?, ?)",
                (run_id, payload["check_id"], payload["status"], json.dumps(payload), payload.get("runtime_ms", 0)),
            )
            await db.commit()

    @staticmethod
    async def finish_run(run_id: str, status: str, peak_rss_mb: float) -> None:
        async with DatabaseConnectionPool.get_connection() as db:
            await db.execute(
                "UPDATE runs SET status = ?, peak_rss_mb = ?, finished_at = ? WHERE run_id = ?",
                (status, peak_rss_mb, datetime.now().isoformat(timespec="seconds"), run_id),
            )
            await db.commit()

    @staticmethod
    async def get_run_reports(run_id: str) -> List[Dict[str, Any]]:
        """Reports of one run in the order they were saved"""
        async with DatabaseConnectionPool.get_connection() as db:
            async with db.execute(
                "SELECT payload_json FROM reports WHERE run_id = ? ORDER BY id", (run_id,)
            ) as cursor:
                rows = await cursor.fetchall()
        reports = []
        for row in rows:
            try:
                reports.append(json.loads(row["payload_json"]))
            except json.JSONDecodeError as e:
                logger.error(f"Corrupt report payload in run {run_id}: {e}")
        return reports

    @staticmethod
    async def get_recent_runs(limit: int = 20) -> List[Dict[str, Any]]:
        async with DatabaseConnectionPool.get_connection() as db:
            async with db.execute(
                """
                SELECT r.run_id, r.started_at, r.finished_at, r.command, r.status, r.peak_rss_mb,
                       COUNT(p.id) AS report_count,
                       SUM(CASE WHEN p.status = 'fail' THEN 1 ELSE 0 END) AS failures
                FROM runs r LEFT JOIN reports p ON p.run_id = r.run_id
                GROUP BY r.run_id
                ORDER BY r.started_at DESC, r.rowid DESC
                LIMIT ?
                """,
                (limit,),
            ) as cursor:
                rows = await cursor.fetchall()
        return [
            {
                "run_id": row["run_id"],
                "started_at": row["started_at"],
                "finished_at": row["finished_at"],
                "command": row["command"],
                "status": row["status"],
                "peak_rss_mb": row["peak_rss_mb"],
                "reports": row["report_count"],
                "failures": row["failures"] or 0,
            }
            for row in rows
        ]
