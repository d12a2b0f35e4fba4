"""Problem file ingestion."""

from src.ingest.problem_file import (
    dump_problem_file,
    function_to_dict,
    parse_problem,
    parse_problem_file,
    problem_to_dict,
)

__all__ = [
    "dump_problem_file",
    "function_to_dict",
    "parse_problem",
    "parse_problem_file",
    "problem_to_dict",
]
