"""Plain-text file formats: CMAT v1 matrices, STATE v1 vectors and CSV tables.

Floats are written with 17 significant digits, which round-trips doubles exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError


def fmt(x):
    return format(float(x), ".17g")


def _fmt_complex(z):
    return f"{fmt(z.real)},{fmt(z.imag)}"


def _parse_complex(token, where):
    try:
        re, im = token.split(",")
        return complex(float(re), float(im))
    except ValueError:
        raise FormatError(f"{where}: cannot parse complex entry {token!r}") from None


def _read_lines(path):
    with open(path, "r", encoding="ascii") as fh:
        return fh.read().splitlines()


def _header(lines, magic, n_fields, path):
    if not lines:
        raise FormatError(f"{path}: empty file")
    parts = lines[0].split()
    if len(parts) != 2 + n_fields or " ".join(parts[:2]) != magic:
        raise FormatError(f"{path}: expected header '{magic} ...', got {lines[0]!r}")
    try:
        dims = [int(p) for p in parts[2:]]
    except ValueError:
        raise FormatError(f"{path}: non-integer dimensions in header {lines[0]!r}") from None
    if any(d < 1 for d in dims):
        raise FormatError(f"{path}: dimensions must be positive")
    return dims


def write_cmat(path, M):
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise FormatError("CMAT needs a 2-D matrix")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"CMAT v1 {M.shape[0]} {M.shape[1]}\n")
        for row in M:
            fh.write(" ".join(_fmt_complex(z) for z in row) + "\n")


def read_cmat(path):
    lines = _read_lines(path)
    rows, cols = _header(lines, "CMAT v1", 2, path)
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise FormatError(f"{path}: expected {rows} rows, found {len(body)}")
    M = np.empty((rows, cols), dtype=np.complex128)
    for r, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != cols:
            raise FormatError(f"{path}: row {r} has {len(tokens)} entries, expected {cols}")
        M[r] = [_parse_complex(t, f"{path}:{r + 2}") for t in tokens]
    return M


def write_state(path, psi):
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"STATE v1 {psi.size}\n")
        fh.writelines(_fmt_complex(z) + "\n" for z in psi)


def read_state(path):
    lines = _read_lines(path)
    (D,) = _header(lines, "STATE v1", 1, path)
    body = [ln.strip() for ln in lines[1:] if ln.strip()]
    if len(body) != D:
        raise FormatError(f"{path}: expected {D} amplitudes, found {len(body)}")
    return np.array([_parse_complex(t, f"{path}:{i + 2}") for i, t in enumerate(body)])


def write_table(path_or_file, header, rows, footer=None):
    """CSV with a header line; every float cell formatted with 17 significant digits."""
    def cell(v):
        return str(v) if isinstance(v, (int, np.integer)) else fmt(v)

    lines = [header] + [",".join(cell(v) for v in row) for row in rows]
    if footer is not None:
        lines.append(footer)
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def write_husimi_csv(path, grid):
    rows = ((i / grid.nx, j / grid.n_p, grid.values[i, j])
            for i in range(grid.nx) for j in range(grid.n_p))
    write_table(path, "x,p,value", rows)


def write_spectrum_csv(path, phases):
    write_table(path, "index,phase", enumerate(phases))


def write_degeneracy_csv(path, classes):
    write_table(path, "phase,multiplicity", classes)


def write_ratios_csv(path, ratios, mean):
    write_table(path, "n,ratio", enumerate(ratios), footer=f"# mean={fmt(mean)}")


def write_scan_csv(path, rows):
    write_table(path, "D,error", rows)


def write_orbit_csv(path, orbit):
    write_table(path, "t,x,p", ((t, z[0], z[1]) for t, z in enumerate(orbit)))
