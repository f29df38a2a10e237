"""Per-criterion outcomes collected during the acceptance run."""

TITLES = {
    1: "T(6,6) over Q: vanishing below the staircase and rank-one green cells",
    2: "T(7,6): vanishing below the staircase and the (11,43) cell",
    3: "s of small torus links over Q and F3",
    4: "associated graded Lee tables",
    5: "skein sequence additivity over Q",
    6: "Poincare polynomials against L_n and K_n",
    7: "staircase relations for 3 <= n <= 200",
    8: "scan homology equals cube homology on the corpus",
    9: "graded Euler characteristic equals the bracket",
    10: "Lee and Bar-Natan dimensions on the corpus",
}

SLOW_PARTS = {2, 5, 6}

RESULTS = {}  # criterion -> list of (part, ok, info)


def record(criterion, part, ok, info=""):
    RESULTS.setdefault(criterion, []).append((part, bool(ok), info))
    return ok


def summary_lines(slow):
    lines = []
    for k in sorted(TITLES):
        parts = RESULTS.get(k)
        if not parts:
            lines.append(f"criterion {k:2d}: NOT RUN  {TITLES[k]}")
            continue
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        bad = [f"{p} ({i})" if i else p for p, ok, i in parts if not ok]
        note = f"  failed: {'; '.join(bad)}" if bad else ""
        if not slow and k in SLOW_PARTS:
            note += "  [slow parts not run]"
        lines.append(f"criterion {k:2d}: {status}  {TITLES[k]}{note}")
    return lines
