"""Command handlers behind app.py.

Each handler returns {'success', 'exit_code', 'message', 'payload'}; exit
code 0 is success, 1 an error or a failed check, 2 an obstruction.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from src.anchored import Obstruction
from src.congruence import is_minimal_representation
from src.construct import minimal_representation
from src.distributive import as_distributive, downset_lattice
from src.enumeration import enumerate_records
from src.errors import MalformedInput, PrincRepError
from src.lattice_core import Lattice
from src.poset_core import Poset
from src.serialization import (
    anchored_to_dict,
    dump_trace_dots,
    lattice_to_dict,
    load_json,
    read_lattice,
    read_structure,
    to_dot,
    write_json,
)
from src.verify import antichain_obstruction

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_OBSTRUCTION = 0, 1, 2
FORMATS = ("json", "dot", "text")


def _result(exit_code: int, message: str, payload: Any = None) -> Dict[str, Any]:
    return {"success": exit_code == EXIT_OK, "exit_code": exit_code, "message": message, "payload": payload}


def _error(exc: Exception) -> Dict[str, Any]:
    logger.debug("command failed", exc_info=exc)
    return _result(EXIT_ERROR, str(exc), {"error": type(exc).__name__})


# =====================================================
# COMMANDS
# =====================================================
def cmd_synthesize(input_path: str, output: Optional[str] = None, fmt: str = "json",
                   trace_dir: Optional[str] = None) -> Dict[str, Any]:
    """Synthesize a certified minimal representation of the input."""
    if fmt not in FORMATS:
        return _result(EXIT_ERROR, f"unknown format {fmt!r}")
    try:
        outcome = minimal_representation(read_structure(input_path))
    except PrincRepError as exc:
        return _error(exc)

    if isinstance(outcome, Obstruction):
        return _result(
            EXIT_OBSTRUCTION,
            f"no minimal representation: {outcome.dual_atoms} dual atoms {list(outcome.antichain)}",
            outcome.to_dict(),
        )

    payload = anchored_to_dict(outcome)
    if fmt == "dot":
        rendered: Any = to_dot(outcome.lattice, outcome.anchors.values())
    elif fmt == "text":
        rendered = outcome.certificate.render()
    else:
        rendered = payload

    if output:
        if fmt == "json":
            write_json(output, payload)
        else:
            Path(output).write_text(rendered)
    if trace_dir:
        dump_trace_dots(outcome, trace_dir)
    return _result(
        EXIT_OK,
        f"certified {outcome.lattice.n}-element lattice for a {outcome.poset.n}-element poset",
        rendered,
    )


def cmd_verify(input_path: str, against: str) -> Dict[str, Any]:
    """Is the lattice a minimal representation of the distributive lattice (or poset)?"""
    try:
        L = read_lattice(input_path)
        target = read_structure(against)
        D = downset_lattice(target).lattice if isinstance(target, Poset) else as_distributive(target).lattice
        report = is_minimal_representation(L, D)
        blocked = antichain_obstruction(D)
    except PrincRepError as exc:
        return _error(exc)

    if blocked is not None:
        report.witness["obstruction"] = blocked.to_dict()
    verdict = "PASS" if report.verdict else "FAIL"
    return _result(EXIT_OK if report.verdict else EXIT_ERROR, f"{verdict}: {report.claim}", report.to_dict())


def cmd_enumerate(max_n: int, jobs: Optional[int] = None, minimal_only: bool = False,
                  represents: Optional[str] = None, size: Optional[int] = None) -> Dict[str, Any]:
    """Enumerate lattices up to isomorphism and classify each one."""
    try:
        target = None
        if represents:
            target = read_structure(represents)
            if not isinstance(target, Poset):
                raise MalformedInput("--represents expects a poset", represents)
        records = [
            record.to_dict()
            for record in enumerate_records(max_n, jobs=jobs, minimal_only=minimal_only, represents=target, size=size)
        ]
    except PrincRepError as exc:
        return _error(exc)

    minimal = sum(1 for r in records if r["minimal"])
    return _result(EXIT_OK, f"{len(records)} lattices, {minimal} minimal representations", records)


def cmd_export(input_path: str, fmt: str = "dot") -> Dict[str, Any]:
    """Re-emit a lattice as JSON or as a DOT Hasse diagram."""
    try:
        if fmt not in ("dot", "json"):
            raise MalformedInput(f"unknown export format {fmt!r}")
        data = load_json(input_path)
        L: Lattice = read_lattice(data.get("lattice", data) if isinstance(data, dict) else data)
        anchors = (data.get("lattice", data) if isinstance(data, dict) else {}).get("anchors", {})
    except PrincRepError as exc:
        return _error(exc)

    if fmt == "json":
        return _result(EXIT_OK, f"{L.n} elements", lattice_to_dict(L, anchors))
    return _result(EXIT_OK, f"{L.n} elements", to_dot(L, anchors.values()))


def dispatch(command: str, **kwargs) -> Dict[str, Any]:
    if command == "synthesize":
        return cmd_synthesize(kwargs["input"], kwargs.get("output"), kwargs.get("format", "json"), kwargs.get("trace"))
    elif command == "verify":
        return cmd_verify(kwargs["input"], kwargs["against"])
    elif command == "enumerate":
        return cmd_enumerate(
            kwargs["max_n"], kwargs.get("jobs"), kwargs.get("minimal_only", False),
            kwargs.get("represents"), kwargs.get("size"),
        )
    elif command == "export":
        return cmd_export(kwargs["input"], kwargs.get("format", "dot"))
    else:
        return _result(EXIT_ERROR, f'Command "{command}" is not implemented.')
