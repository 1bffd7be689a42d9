"""Adversarial instance factory and stress-workload generators.

Two constructions:

* Batched instances (m haystack strings against one needle under a
  sampled symmetric weight table) lifted through the sentinel-and-filler
  gadget into a single pair (X~, Y~) of equal length with unweighted edit
  distance at most 4, plus thresholds such that the weighted distance of
  the pair crosses its threshold exactly when some batched distance
  crosses k.  Dollar-sentinel mismatches are encoded as a finite value
  just above the lifted threshold, so weighted distances *above* that
  threshold are not faithful; everything the equivalence needs is.

* Dagger streams: blocks X_i joined by a symbol so expensive that a
  bounded-distance query of the concatenation isolates one block, turning
  a session replay into m independent per-block distance probes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEL, INS, SUB, Edit, EditScript, Symbols, WeightTable, symbols
from .dp_oracle import brute_min_batched, ed_bounded, ed_full
from .pillar_lv import lv_ed
from .workload import Workload


@dataclass
class BatchedInstance:
    """m strings against one target; disjoint alphabets, tied threshold."""

    Xs: list[Symbols]
    Y: Symbols
    w: WeightTable
    k_num: int
    h: int
    sigma_x: int
    sigma_y: int
    seed: int | None = None

    @property
    def x(self) -> int:
        return len(self.Xs[0])

    @property
    def y(self) -> int:
        return len(self.Y)

    def validate(self) -> None:
        den = self.w.den
        x, y = self.x, self.y
        if not (2 * self.h <= x <= y):
            raise ValueError("need 2h <= x <= y")
        if any(len(Xi) != x for Xi in self.Xs):
            raise ValueError("all X_i must share one length")
        if len(self.Xs) >= 2:
            hd = max(int((a != b).sum()) for a, b in zip(self.Xs, self.Xs[1:]))
            if hd > self.h:
                raise ValueError(f"consecutive Hamming distance {hd} exceeds h={self.h}")
        if not (2 * y - x) * den <= self.k_num < (2 * y - x + 1) * den:
            raise ValueError("threshold outside [2y-x, 2y-x+1) units")
        cells = self.w.cells
        if (cells != cells.T).any():
            raise ValueError("weight table must be symmetric")
        if self.w.validate() is not None:
            raise ValueError("weight table not normalized")
        off = ~np.eye(self.w.sigma + 1, dtype=bool)
        if cells[off].max() > 2 * den:
            raise ValueError("off-diagonal weights must lie in [1, 2] units")
        eps = self.w.eps
        for a in range(self.sigma_x):
            if cells[a, eps] != den:
                raise ValueError("deleting a needle symbol must cost one unit")
        for b in range(self.sigma_x, self.sigma_x + self.sigma_y):
            if cells[eps, b] != 2 * den:
                raise ValueError("inserting a target symbol must cost two units")


def gen_batched(
    m: int, x: int, y: int, h: int, seed: int, *, den: int = 2, force: str | None = None
) -> BatchedInstance:
    """Synthesize a batched instance satisfying all structural bullets.

    ``force`` steers the answer: 'yes' plants one X_i whose best alignment
    to Y lands at exactly 2y-x units (inside the threshold window); 'no'
    pushes every needle-vs-target substitution strictly above one unit,
    which puts every distance above the window (requires x >= den).
    """
    if m < 1 or h < 1 or not (2 * h <= x <= y):
        raise ValueError("need m >= 1, h >= 1, and 2h <= x <= y")
    if force == "no" and x < den:
        raise ValueError("'no' steering needs x >= den")
    rng = np.random.default_rng(seed)
    sigma_x = max(2, min(x, 5))
    sigma_y = max(2, min(y, 5))
    sigma = sigma_x + sigma_y
    first = rng.integers(0, sigma_x, size=x)
    Xs = [first]
    for _ in range(m - 1):
        nxt = Xs[-1].copy()
        for j in rng.choice(x, size=h, replace=False):
            nxt[j] = (nxt[j] + 1 + rng.integers(0, sigma_x - 1)) % sigma_x
        Xs.append(nxt)
    Y = symbols(rng.integers(sigma_x, sigma, size=y))

    lo = den if force != "no" else den + 1
    cells = rng.integers(lo, 2 * den + 1, size=(sigma + 1, sigma + 1))
    cells = np.minimum(cells, cells.T)
    np.fill_diagonal(cells, 0)
    eps = sigma
    cells[:sigma_x, eps] = den
    cells[eps, :sigma_x] = den
    cells[sigma_x:sigma, eps] = 2 * den
    cells[eps, sigma_x:sigma] = 2 * den
    if force == "yes":
        i_star = int(rng.integers(0, m))
        for j in range(x):
            a, b = int(Xs[i_star][j]), int(Y[j])
            cells[a, b] = cells[b, a] = den
    k_num = (2 * y - x) * den + int(rng.integers(0, den))
    inst = BatchedInstance(
        [symbols(Xi) for Xi in Xs],
        Y,
        WeightTable(sigma, den, cells),
        k_num,
        h,
        sigma_x,
        sigma_y,
        seed,
    )
    inst.validate()
    return inst


@dataclass
class HardPair:
    """The lifted pair with its gadget pieces kept for auditing."""

    w_hat: WeightTable
    Xt: Symbols
    Yt: Symbols
    k_hat_num: int
    k_tilde_num: int
    r: int
    sent: int
    X_hat_p: Symbols
    X_hat: Symbols
    Y_hat: Symbols
    Y_hat_s: Symbols
    tops: list[Symbols]
    bots: list[Symbols]
    mids: list[Symbols]  # diamond-wrapped X_i for i in [1..m]
    dollar: int
    source: BatchedInstance = field(repr=False, default=None)

    def audit_table(self) -> WeightTable:
        """Same table with dollar mismatches priced effectively infinite."""
        cells = self.w_hat.cells.copy()
        cells[cells == self.sent] = 1 << 40
        return WeightTable(self.w_hat.sigma, self.w_hat.den, cells)


def r_formula(m: int, h: int, x: int, k_units: int) -> int:
    """Filler-block length; any value at least this keeps the counting tight."""
    return (m - 1) * (8 * h + 8) + 2 * x + k_units + 6 * h + 7


def lift(b: BatchedInstance) -> HardPair:
    """Build (X~, Y~, w-hat, thresholds) from a batched instance."""
    b.validate()
    den = b.w.den
    m, x, y, h = len(b.Xs), b.x, b.y, b.h
    k_units = -(-b.k_num // den)  # string lengths need an integer edit budget
    r = r_formula(m, h, x, k_units)

    base = b.sigma_x + b.sigma_y
    u0 = base
    v0 = base + r
    diamond = base + 2 * r
    bot = diamond + 1
    top = diamond + 2
    dollar = diamond + 3
    sigma_hat = base + 2 * r + 4

    k_hat_num = ((m - 1) * (8 * h + 8) + 2 * r + 2 * x + 6 * h + 6) * den + b.k_num
    k_tilde_num = k_hat_num + (6 * r + 3 * x + 6 * y + 2) * den
    sent = k_tilde_num + 1

    cells = np.full((sigma_hat + 1, sigma_hat + 1), den, dtype=np.int64)
    eps = sigma_hat
    cells[:base, :base] = b.w.cells[:base, :base]
    cells[:base, eps] = b.w.cells[:base, base]
    cells[eps, :base] = b.w.cells[base, :base]
    for a in (diamond, bot, top):
        for bb in (diamond, bot, top):
            if a != bb:
                cells[a, bb] = 2 * den
    cells[dollar, :] = sent
    cells[:, dollar] = sent
    np.fill_diagonal(cells, 0)
    w_hat = WeightTable(sigma_hat, den, cells)

    # paper-indexed strings: X[0] = X[1], X[i] = Xs[i-1]
    X = [b.Xs[0]] + list(b.Xs)
    H = {i: set(np.flatnonzero(X[i] != X[i + 1]).tolist()) for i in range(1, m)}

    def f_set(i: int) -> list[int]:
        need = H.get(i, set()) | H.get(i + 1, set())
        fill = sorted(need)
        for j in range(x):
            if len(fill) >= 2 * h:
                break
            if j not in need:
                fill.append(j)
        assert len(fill) == 2 * h, "2h <= x guarantees enough filler indices"
        return sorted(fill)

    F = {i: f_set(i) for i in range(-1, m + 1)}
    tops, bots = [], []
    for i in range(m + 1):
        t = X[i].copy()
        t[F[i - 1]] = top
        tops.append(symbols(t))
        bo = X[i].copy()
        bo[F[i]] = bot
        bots.append(symbols(bo))

    U = symbols(np.arange(u0, u0 + r))
    V = symbols(np.arange(v0, v0 + r))
    dia = symbols([diamond])
    Y = b.Y

    def cat(*parts):
        return symbols(np.concatenate([np.asarray(p, dtype=np.int64) for p in parts]))

    mids = [cat(dia, X[i], dia) for i in range(m + 1)]  # mids[i] = <>X_i<>
    X_hat_p = cat(U, tops[0], V, dia, Y, dia, U, bots[0], V, Y)
    X_hat = cat(
        *(
            cat(U, mids[i], V, Y, U, tops[i], V, dia, Y, dia, U, bots[i], V, Y)
            for i in range(1, m + 1)
        )
    )
    Y_hat = cat(
        *(
            cat(U, tops[i - 1], V, dia, Y, dia, U, bots[i - 1], V, Y, U, mids[i], V, Y)
            for i in range(1, m + 1)
        ),
        U,
        tops[m],
        V,
        dia,
        Y,
        dia,
    )
    Y_hat_s = cat(U, bots[m], V, Y)
    ds = symbols([dollar])
    Xt = cat(X_hat_p, ds, X_hat, ds)
    Yt = cat(ds, Y_hat, ds, Y_hat_s)

    if cat(X_hat_p, X_hat).tolist() != cat(Y_hat, Y_hat_s).tolist():
        raise AssertionError("gadget assembly broke the shared-superstring identity")
    if len(Xt) != len(Yt):
        raise AssertionError("lifted strings must have equal length")
    return HardPair(
        w_hat,
        Xt,
        Yt,
        k_hat_num,
        k_tilde_num,
        r,
        sent,
        X_hat_p,
        X_hat,
        Y_hat,
        Y_hat_s,
        tops,
        bots,
        mids,
        dollar,
        b,
    )


def verify_small(hp: HardPair, b: BatchedInstance) -> bool:
    """Check the lifted pair decides exactly the batched question."""
    if len(hp.Xt) > 3000:
        raise ValueError("instance too large for the quadratic check")
    lifted = ed_full(hp.Xt, hp.Yt, hp.w_hat)
    batched = brute_min_batched(b.Xs, b.Y, b.w)
    return (lifted <= hp.k_tilde_num) == (batched <= b.k_num)


def audit_gadget_claims(hp: HardPair) -> None:
    """Distances between gadget pieces match their closed forms exactly."""
    den = hp.w_hat.den
    h = hp.source.h
    m = len(hp.source.Xs)
    w = hp.w_hat
    for i in range(m + 1):
        assert ed_full(hp.tops[i], hp.bots[i], w) == 4 * h * den
    for i in range(1, m + 1):
        assert ed_full(hp.tops[i], hp.bots[i - 1], w) == 4 * h * den
        for Z in (hp.tops[i], hp.bots[i], hp.tops[i - 1], hp.bots[i - 1]):
            assert ed_full(hp.mids[i], Z, w) == (2 * h + 2) * den
    # offset identity, under a table where dollar rows are effectively infinite
    audit = hp.audit_table()
    off = (6 * hp.r + 3 * hp.source.x + 6 * hp.source.y + 2) * den
    assert ed_full(hp.Xt, hp.Yt, audit) == ed_full(hp.X_hat, hp.Y_hat, audit) + off


def recompute_thresholds(b: BatchedInstance) -> tuple[int, int, int]:
    """Second, independently arranged evaluation of (r, k-hat, k-tilde)."""
    den = b.w.den
    m, x, y, h = len(b.Xs), b.x, b.y, b.h
    ku = -(-b.k_num // den)
    r = (m - 1) * (8 * h + 8) + 2 * x + ku + 6 * h + 7
    k_tilde = ((m - 1) * (8 * h + 8) + 8 * r + 5 * x + 6 * y + 6 * h + 8) * den + b.k_num
    k_hat = k_tilde - (6 * r + 3 * x + 6 * y + 2) * den
    return r, k_hat, k_tilde


# ---------------------------------------------------------------------------
# Dagger stress workloads


def gen_dagger_stream(Xs, Ys, ks, w: WeightTable):
    """Session workload isolating per-block distances via an expensive joiner.

    Each block i is morphed into Y_i with at most 4 edits, queried, and
    reverted.  Returns (workload, expected per-query numerators).
    """
    if not (len(Xs) == len(Ys) == len(ks)) or not Xs:
        raise ValueError("need matching nonempty block lists")
    scripts = []
    for Xi, Yi in zip(Xs, Ys):
        hint = lv_ed(symbols(Xi), symbols(Yi), 4)
        if hint is None:
            raise ValueError("block distance exceeds 4 edits")
        scripts.append(EditScript.from_breakpoints(hint[1], symbols(Xi), symbols(Yi)))
    k_session = max(int(k) for k in ks)
    dag = w.sigma
    sigma2 = w.sigma + 1
    cells = np.full((sigma2 + 1, sigma2 + 1), (k_session + 1) * w.den, dtype=np.int64)
    cells[: w.sigma, : w.sigma] = w.cells[: w.sigma, : w.sigma]
    cells[: w.sigma, sigma2] = w.cells[: w.sigma, w.sigma]
    cells[sigma2, : w.sigma] = w.cells[w.sigma, : w.sigma]
    np.fill_diagonal(cells, 0)
    w2 = WeightTable(sigma2, w.den, cells)

    blocks = []
    for Xi in Xs:
        blocks.extend([int(v) for v in Xi])
        blocks.append(dag)
    X = symbols(blocks)
    commands = []
    expected = []
    offset = 0
    for Xi, Yi, ki, script in zip(Xs, Ys, ks, scripts):
        applied = []
        shift = 0
        cur = [int(v) for v in Xi]
        for e in script.edits:
            p = e.pos + shift + offset
            if e.kind == INS:
                commands.append(("U", "Y", Edit(INS, p, e.sym)))
                applied.append((INS, p, None))
                cur.insert(e.pos + shift, int(e.sym))
                shift += 1
            elif e.kind == DEL:
                old = cur.pop(e.pos + shift)
                commands.append(("U", "Y", Edit(DEL, p)))
                applied.append((DEL, p, old))
                shift -= 1
            else:
                old = cur[e.pos + shift]
                commands.append(("U", "Y", Edit(SUB, p, e.sym)))
                applied.append((SUB, p, old))
                cur[e.pos + shift] = int(e.sym)
        commands.append(("Q",))
        val, _ = ed_bounded(symbols(Xi), symbols(Yi), k_session, w2)
        expected.append(val)
        for kind, p, old in reversed(applied):
            if kind == INS:
                commands.append(("U", "Y", Edit(DEL, p)))
            elif kind == DEL:
                commands.append(("U", "Y", Edit(INS, p, old)))
            else:
                commands.append(("U", "Y", Edit(SUB, p, old)))
        offset += len(Xi) + 1
    wl = Workload(len(X), k_session, w2, X, X.copy(), commands)
    return wl, expected
