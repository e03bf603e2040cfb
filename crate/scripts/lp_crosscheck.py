"""Solve an exported primal with HiGHS and print the optimum.

usage: python3 scripts/lp_crosscheck.py model.lp
"""
import sys

from scipy.optimize import linprog

def parse_expr(text, index):
    coeffs, sign, factor = {}, 1.0, 1.0
    for token in text.split():
        if token in "+-":
            sign = -1.0 if token == "-" else 1.0
        elif token[0].isalpha() or token[0] == "_":
            col = index.setdefault(token, len(index))
            coeffs[col] = coeffs.get(col, 0.0) + sign * factor
            sign, factor = 1.0, 1.0
        else:
            factor = float(token)
    return coeffs


def read(path):
    section, statements = None, []
    for raw in open(path):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("\\"):
            continue
        head = line.strip().lower()
        if head in ("maximize", "subject to", "bounds", "end"):
            section = head
            continue
        if line.startswith("    ") and statements:
            statements[-1][1] += " " + line.strip()
        else:
            statements.append([section, line.strip()])
    index, objective, rows = {}, {}, []
    for section, text in statements:
        if section == "maximize":
            objective = parse_expr(text.split(":", 1)[1], index)
        elif section == "subject to":
            body = text.split(":", 1)[1]
            lhs, rhs = body.split("<=")
            rows.append((parse_expr(lhs, index), float(rhs)))
    return index, objective, rows


def main():
    index, objective, rows = read(sys.argv[1])
    n = len(index)
    c = [0.0] * n
    for col, v in objective.items():
        c[col] = -v
    a = [[0.0] * n for _ in rows]
    b = []
    for i, (coeffs, rhs) in enumerate(rows):
        for col, v in coeffs.items():
            a[i][col] = v
        b.append(rhs)
    res = linprog(c, A_ub=a, b_ub=b, bounds=(0, None), method="highs")
    if res.status != 0:
        sys.exit(f"solver status {res.status}: {res.message}")
    print(repr(-res.fun))


if __name__ == "__main__":
    main()
