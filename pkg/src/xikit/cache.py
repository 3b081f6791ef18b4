"""Text cache files for computed coefficient families.

Plain-text, diff-friendly, locale-free: a commented header carrying the
generating configuration followed by one ``index<TAB>decimal-string`` row
per coefficient. Decimal strings are written at the declared digit count,
so files round-trip and are byte-identical across reruns of the same
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from mpmath import mp, mpf

from . import __version__
from .errors import InvariantViolation, XikitError
from .xi import XI0_REFERENCE

FAMILIES = ("xi_r", "a_n", "lambda_n", "C-row", "Sigma_p")
_START_INDEX = {"xi_r": 0, "a_n": 1, "lambda_n": 1, "C-row": 1, "Sigma_p": 0}


@dataclass(frozen=True)
class CacheFile:
    family: str
    digits: int
    method: str
    generator: str
    params: dict      # extra truncation parameters, str -> str
    start_index: int
    rows: tuple       # decimal strings, index k holds start_index + k

    def values(self):
        """Rows parsed back to mpf at the declared precision (plus guard)."""
        with mp.workdps(self.digits + 10):
            return tuple(mpf(r) for r in self.rows)


def format_value(v, digits: int) -> str:
    return mp.nstr(v, digits, strip_zeros=False, min_fixed=-4, max_fixed=6)


def write_cache(path, family: str, digits: int, method: str, values,
                params: dict | None = None, start_index: int | None = None) -> CacheFile:
    if family not in FAMILIES:
        raise XikitError("unknown cache family %r" % family)
    start = _START_INDEX[family] if start_index is None else start_index
    params = dict(params or {})
    with mp.workdps(digits + 10):
        rows = tuple(format_value(v, digits) for v in values)
    cf = CacheFile(family=family, digits=digits, method=method,
                   generator="xikit %s" % __version__, params=params,
                   start_index=start, rows=rows)
    lines = [
        "# family: %s" % family,
        "# digits: %d" % digits,
        "# method: %s" % method,
        "# generator: %s" % cf.generator,
        "# start-index: %d" % start,
    ]
    for k in sorted(params):
        lines.append("# param %s: %s" % (k, params[k]))
    for i, r in enumerate(rows):
        lines.append("%d\t%s" % (start + i, r))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    return cf


def read_cache(path) -> CacheFile:
    header = {}
    params = {}
    rows = []
    expected = None
    for line in Path(path).read_text(encoding="ascii").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, val = body.partition(":")
            key = key.strip()
            val = val.strip()
            if key.startswith("param "):
                params[key[6:]] = val
            else:
                header[key] = val
            continue
        idx_s, _, val = line.partition("\t")
        idx = int(idx_s)
        if expected is None:
            expected = idx
        if idx != expected:
            raise InvariantViolation("non-contiguous indices in %s at %d" % (path, idx))
        expected += 1
        rows.append(val)
    for key in ("family", "digits", "method", "generator", "start-index"):
        if key not in header:
            raise XikitError("cache %s missing header field %r" % (path, key))
    family = header["family"]
    if family not in FAMILIES:
        raise XikitError("cache %s has unknown family %r" % (path, family))
    start = int(header["start-index"])
    return CacheFile(family=family, digits=int(header["digits"]),
                     method=header["method"], generator=header["generator"],
                     params=params, start_index=start, rows=tuple(rows))


def verify_cache(cf: CacheFile) -> list[str]:
    """Offline re-check of the family invariants; returns found problems."""
    problems = []
    with mp.workdps(cf.digits + 10):
        vals = cf.values()
        if cf.start_index != _START_INDEX[cf.family]:
            problems.append("start index %d, expected %d"
                            % (cf.start_index, _START_INDEX[cf.family]))
        for i, (v, raw) in enumerate(zip(vals, cf.rows)):
            if mpf(format_value(v, cf.digits)) != v:
                # parse/format round trip must be stable at declared digits
                problems.append("row %d does not round-trip: %s" % (i, raw))
                break
        if cf.family == "xi_r":
            if any(v <= 0 for v in vals):
                problems.append("xi_r positivity violated")
            places = min(cf.digits, 20)
            if vals and abs(vals[0] - mpf(XI0_REFERENCE)) > mpf(10) ** (-places):
                problems.append("xi_0 fails its %d-place anchor" % places)
            if len(vals) > 10:
                unity = 2 * sum(v / mpf(4) ** r for r, v in enumerate(vals))
                tail = 2 * vals[-1] / mpf(4) ** (len(vals) - 1) / 3
                if abs(unity - 1) > mpf(10) ** (-cf.digits + 2) + tail:
                    problems.append("2 sum xi_r/4^r misses 1: %s" % mp.nstr(unity, 25))
        elif cf.family == "a_n":
            if any(v <= 0 for v in vals):
                problems.append("a_n positivity violated")
            if any(vals[i + 1] <= vals[i] for i in range(len(vals) - 1)):
                problems.append("a_n not strictly increasing")
            if vals:
                a1 = vals[0]
                for n in range(2, len(vals) + 1):
                    if not vals[n - 1] > n * a1 * (1 - mpf(10) ** (-cf.digits + 2)):
                        problems.append("a_%d under the n*a_1 lower bound" % n)
                        break
        elif cf.family == "lambda_n":
            if any(v <= 0 for v in vals):
                problems.append("lambda positivity violated")
        elif cf.family == "C-row":
            n = cf.params.get("n")
            if n is None:
                problems.append("C-row cache missing param n")
            else:
                n = int(n)
                if len(vals) != n:
                    problems.append("C-row length %d != n=%d" % (len(vals), n))
                tol = mpf(10) ** (-cf.digits + 2)
                for p in range(1, len(vals) + 1):
                    if (n + p) % 2 == 1 and vals[p - 1] != 0:
                        problems.append("C_{%d,%d} nonzero off parity" % (n, p))
                        break
                    if (n + p) % 2 == 0 and not vals[p - 1] > 0:
                        problems.append("C_{%d,%d} not positive" % (n, p))
                        break
                if len(vals) == n and abs(sum(vals) / (4 * n) - 1) > tol:
                    problems.append("row sum misses 4n")
        elif cf.family == "Sigma_p":
            if any(v <= 0 for v in vals):
                problems.append("Sigma positivity violated")
            if any(vals[p + 1] <= vals[p] for p in range(1, len(vals) - 1)):
                problems.append("Sigma_p not strictly increasing for p >= 1")
    return problems
