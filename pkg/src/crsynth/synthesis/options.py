from __future__ import annotations

from dataclasses import dataclass, field

STRATEGIES = ("auto", "simple", "group", "monoid")


@dataclass
class SynthesisOptions:
    """Knobs and resource caps for the constructions.

    ``strategy`` picks how group images are handled: ``auto`` and ``monoid``
    use the single-letter rule or the common-weight window when possible and
    fall back to the marker construction; ``group`` always uses the marker
    construction; ``simple`` requires the common-weight window at the top.
    """

    strategy: str = "auto"
    max_rules: int = 10**6
    max_irr: int = 10**6
    max_nodes: int = 2 * 10**6  # search budget for marker rules
    retries: int = 3
    t_omega: int | None = None
    t_policy: str = "minimal"  # or "formula": also force t > max |v_g|
    check_length: int = 10
    max_check_words: int = 200_000
    trace: list = field(default_factory=list)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.t_policy not in ("minimal", "formula"):
            raise ValueError(f"unknown t policy {self.t_policy!r}")

    def note(self, depth: int, message: str):
        self.trace.append("  " * depth + message)
