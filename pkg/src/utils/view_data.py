"""Utility script to view the run ledger."""

import argparse
import json
import sqlite3
from pathlib import Path

import pandas as pd
import yaml


def view_runs(config: dict, limit: int = 20, command: str = None):
    """View the most recent bound runs."""
    conn = sqlite3.connect(config["database"]["path"])
    query = (
        "SELECT run_id, timestamp, command, family, sense, bound, gap, iterations, converged "
        "FROM bound_runs"
    )
    params = []
    if command:
        query += " WHERE command = ?"
        params.append(command)
    query += " ORDER BY timestamp DESC, run_id DESC LIMIT ?"
    params.append(limit)
    df = pd.read_sql_query(query, conn, params=tuple(params))
    conn.close()

    if df.empty:
        print("No runs found in the ledger.")
    else:
        print(f"\n=== BOUND RUNS (showing {len(df)} most recent) ===")
        print(df.to_string(index=False))
        not_converged = int((df["converged"] == 0).sum())
        if not_converged:
            print(f"\n{not_converged} run(s) did not converge")
    return df


def view_problem(config: dict, run_id: str):
    """Print the problem document stored with one run."""
    conn = sqlite3.connect(config["database"]["path"])
    row = conn.execute("SELECT problem FROM bound_runs WHERE run_id = ?", (run_id,)).fetchone()
    conn.close()
    if row is None:
        print(f"Run {run_id} not found.")
        return None
    problem = json.loads(row[0])
    print(json.dumps(problem, indent=2))
    return problem


def main():
    parser = argparse.ArgumentParser(description="View the bound run ledger")
    parser.add_argument("--config", type=str, default="config/config.yaml", help="Config file path")
    parser.add_argument("--runs", action="store_true", help="View recent runs")
    parser.add_argument("--command", type=str, help="Filter runs by command (bound, export)")
    parser.add_argument("--problem", type=str, help="Show the problem of a run id")
    parser.add_argument("--all", action="store_true", help="View every recorded run")
    parser.add_argument("--limit", type=int, default=20, help="Limit number of records")

    args = parser.parse_args()

    config_path = Path(args.config)
    if not config_path.exists():
        print(f"Error: Config file not found: {config_path}")
        return

    with open(config_path, "r") as f:
        config = yaml.safe_load(f)

    if not Path(config["database"]["path"]).exists():
        print("No run ledger yet: run a bound first.")
        return

    if args.problem:
        view_problem(config, args.problem)
    elif args.all:
        view_runs(config, limit=-1, command=args.command)
    else:
        view_runs(config, limit=args.limit, command=args.command)


if __name__ == "__main__":
    main()
