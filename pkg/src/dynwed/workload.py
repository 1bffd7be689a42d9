"""Line-oriented workload files: weights, strings, and an update/query stream.

Format:

    WED 1
    N <n> K <k> DEN <den>
    SIGMA <sigma>
    W
    <sigma+1 rows of sigma+1 integers>   # row/col index sigma is epsilon
    X <len> <ids...>
    Y <len> <ids...>
    U X|Y SUB <pos> <id>
    U X|Y INS <pos> <id>
    U X|Y DEL <pos>
    Q

'#' starts a comment.  Update positions are validated at execution time,
not parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEL, INS, SUB, Edit, Symbols, WeightTable, symbols

MAGIC = "WED 1"


class ParseError(ValueError):
    def __init__(self, line_no: int, msg: str):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


@dataclass
class Workload:
    n: int
    k: int
    w: WeightTable
    X: Symbols
    Y: Symbols
    commands: list = field(default_factory=list)  # ("U", "X"|"Y", Edit) | ("Q",)
    header_comments: list = field(default_factory=list)

    def dump(self) -> str:
        lines = [MAGIC]
        lines.extend(f"# {c}" for c in self.header_comments)
        lines.append(f"N {self.n} K {self.k} DEN {self.w.den}")
        lines.append(f"SIGMA {self.w.sigma}")
        lines.append("W")
        for row in self.w.cells:
            lines.append(" ".join(str(int(v)) for v in row))
        lines.append(f"X {len(self.X)} " + " ".join(str(int(v)) for v in self.X))
        lines.append(f"Y {len(self.Y)} " + " ".join(str(int(v)) for v in self.Y))
        for cmd in self.commands:
            if cmd[0] == "Q":
                lines.append("Q")
            else:
                _, tgt, e = cmd
                if e.kind == SUB:
                    lines.append(f"U {tgt} SUB {e.pos} {e.sym}")
                elif e.kind == INS:
                    lines.append(f"U {tgt} INS {e.pos} {e.sym}")
                else:
                    lines.append(f"U {tgt} DEL {e.pos}")
        return "\n".join(lines) + "\n"


def _ints(parts, line_no, expect=None):
    try:
        out = [int(p) for p in parts]
    except ValueError as exc:
        raise ParseError(line_no, f"expected integers, got {parts!r}") from exc
    if expect is not None and len(out) != expect:
        raise ParseError(line_no, f"expected {expect} integers, got {len(out)}")
    return out


def parse_workload(text: str) -> Workload:
    raw = text.splitlines()
    lines: list[tuple[int, str]] = []
    comments = []
    for no, line in enumerate(raw, start=1):
        body = line.split("#", 1)[0].strip()
        if line.strip().startswith("#"):
            comments.append(line.strip()[1:].strip())
        if body:
            lines.append((no, body))
    pos = 0

    def take(prefix: str | None = None):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(len(raw) + 1, "unexpected end of file")
        no, body = lines[pos]
        pos += 1
        if prefix is not None and not body.startswith(prefix):
            raise ParseError(no, f"expected {prefix!r}, got {body!r}")
        return no, body

    no, magic = take()
    if magic != MAGIC:
        raise ParseError(no, f"bad header {magic!r}, expected {MAGIC!r}")
    no, hdr = take("N ")
    parts = hdr.split()
    if len(parts) != 6 or parts[0] != "N" or parts[2] != "K" or parts[4] != "DEN":
        raise ParseError(no, f"malformed size header {hdr!r}")
    n, k, den = _ints([parts[1], parts[3], parts[5]], no)
    no, sig = take("SIGMA")
    sigma = _ints(sig.split()[1:], no, 1)[0]
    take("W")
    cells = np.zeros((sigma + 1, sigma + 1), dtype=np.int64)
    for r in range(sigma + 1):
        no, row = take()
        cells[r] = _ints(row.split(), no, sigma + 1)
    w = WeightTable(sigma, den, cells)

    def string_line(tag):
        no, body = take(tag)
        parts = body.split()
        length = _ints(parts[1:2], no, 1)[0]
        ids = _ints(parts[2:], no, length)
        s = symbols(ids)
        if len(s) and (s.min() < 0 or s.max() >= sigma):
            raise ParseError(no, "symbol id out of alphabet range")
        return s

    X = string_line("X ")
    Y = string_line("Y ")
    commands = []
    while pos < len(lines):
        no, body = take()
        parts = body.split()
        if parts[0] == "Q":
            if len(parts) != 1:
                raise ParseError(no, "Q takes no arguments")
            commands.append(("Q",))
            continue
        if parts[0] != "U" or len(parts) < 4 or parts[1] not in ("X", "Y"):
            raise ParseError(no, f"malformed command {body!r}")
        op = parts[2]
        if op == "SUB":
            p, s = _ints(parts[3:], no, 2)
            e = Edit(SUB, p, s)
        elif op == "INS":
            p, s = _ints(parts[3:], no, 2)
            e = Edit(INS, p, s)
        elif op == "DEL":
            (p,) = _ints(parts[3:], no, 1)
            e = Edit(DEL, p)
        else:
            raise ParseError(no, f"unknown update kind {op!r}")
        commands.append(("U", parts[1], e))
    return Workload(n, k, w, X, Y, commands, comments)
