from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class VerificationReport:
    """Evidence for one claim checked on one instance.

    `checks` holds the verdict of every sub-statement; `witness` holds data
    for the first failing one (and any maps worth keeping on success).
    """

    claim: str
    instance: str
    verdict: bool = True
    checks: Dict[str, bool] = field(default_factory=dict)
    witness: Dict[str, Any] = field(default_factory=dict)
    children: List["VerificationReport"] = field(default_factory=list)

    def record(self, name: str, ok: bool, witness: Optional[Any] = None) -> bool:
        self.checks[name] = bool(ok)
        if not ok:
            self.verdict = False
            self.witness.setdefault(name, witness if witness is not None else "violated")
        return bool(ok)

    def attach(self, child: "VerificationReport") -> "VerificationReport":
        self.children.append(child)
        if not child.verdict:
            self.verdict = False
            self.witness.setdefault(child.claim, child.witness)
        return child

    def failed(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "claim": self.claim,
            "instance": self.instance,
            "verdict": self.verdict,
            "checks": dict(self.checks),
            "witness": _plain(self.witness),
            "children": [child.to_dict() for child in self.children],
        }

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        mark = "PASS" if self.verdict else "FAIL"
        lines = [f"{pad}[{mark}] {self.claim} on {self.instance}"]
        for name, ok in self.checks.items():
            if not ok:
                lines.append(f"{pad}    {name}: {self.witness.get(name)}")
        for child in self.children:
            lines.append(child.render(indent + 1))
        return "\n".join(lines)


def _plain(value: Any) -> Any:
    """Make witness payloads JSON friendly."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if hasattr(value, "item"):
        return value.item()
    return str(value)
