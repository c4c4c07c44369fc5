"""Symbolic correlator keys shared by the GW, FJRW and relation layers."""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["Correlator", "gw_primary", "theta", "dtw_bracket", "CorrelatorKeyError"]


class CorrelatorKeyError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Correlator:
    """A symbolic unknown.

    ``kind`` is ``"GW"`` (quintic descendant, insertions ``(a, k)`` for
    ``tau_a(h^k)``), ``"FJRW"`` (primitive ``Theta_{g,k}``) or ``"DTW"``
    (dual-twisted bracket, insertions ``(a, m)`` for ``tau_a(zeta^m)``; the
    stored value ``c`` means the bracket equals ``c * t^p`` with ``p`` fixed by
    the degree count).
    """

    kind: str
    g: int
    d: int = 0
    k: int = 0
    insertions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("GW", "FJRW", "DTW"):
            raise CorrelatorKeyError(f"unknown correlator kind {self.kind!r}")
        object.__setattr__(self, "insertions", tuple(sorted(tuple(x) for x in self.insertions)))

    @property
    def kb_kind(self) -> str:
        return "DTW-bracket" if self.kind == "DTW" else self.kind

    def key(self) -> str:
        if self.kind == "GW":
            head = f"GW(g={self.g},d={self.d}"
            if self.insertions:
                head += ";" + ",".join(f"tau{a}(h{k})" for a, k in self.insertions)
            return head + ")"
        if self.kind == "FJRW":
            return f"FJRW(g={self.g},k={self.k})"
        body = ",".join(f"tau{a}(z{m})" for a, m in self.insertions)
        return f"DTW(g={self.g};{body})"

    def __str__(self) -> str:
        return self.key()

    @classmethod
    def parse(cls, text: str) -> "Correlator":
        text = text.strip()
        m = re.fullmatch(r"GW\(g=(\d+),d=(\d+)(?:;(.*))?\)", text)
        if m:
            ins = _parse_ins(m.group(3), "h") if m.group(3) else ()
            return cls("GW", int(m.group(1)), d=int(m.group(2)), insertions=ins)
        m = re.fullmatch(r"FJRW\(g=(\d+),k=(\d+)\)", text)
        if m:
            return cls("FJRW", int(m.group(1)), k=int(m.group(2)))
        m = re.fullmatch(r"DTW\(g=(\d+);(.*)\)", text)
        if m:
            return cls("DTW", int(m.group(1)), insertions=_parse_ins(m.group(2), "z"))
        raise CorrelatorKeyError(f"unparseable correlator key {text!r}")


def _parse_ins(body: str, letter: str) -> tuple[tuple[int, int], ...]:
    out = []
    for tok in body.split(","):
        if not tok:
            continue
        m = re.fullmatch(rf"tau(\d+)\({letter}(\d+)\)", tok.strip())
        if not m:
            raise CorrelatorKeyError(f"bad insertion {tok!r}")
        out.append((int(m.group(1)), int(m.group(2))))
    return tuple(out)


def gw_primary(g: int, d: int) -> Correlator:
    return Correlator("GW", g, d=d)


def theta(g: int, k: int) -> Correlator:
    return Correlator("FJRW", g, k=k)


def dtw_bracket(g: int, insertions) -> Correlator:
    return Correlator("DTW", g, insertions=tuple(insertions))
