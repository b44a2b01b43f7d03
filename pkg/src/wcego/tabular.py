"""Deterministic tabular output.

CSV convention pinned for golden files: '.' decimal, ',' separator, one
header row, LF line endings, floats at 9 significant digits.
"""

import json

import numpy as np


def format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_cell(v) for v in row) + "\n")


def write_json_table(path, header, rows):
    records = [{k: (format_cell(v) if isinstance(v, (float, np.floating))
                    else (int(v) if isinstance(v, (int, np.integer)) else v))
                for k, v in zip(header, row)} for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(records, fh, indent=2)
        fh.write("\n")


def write_table(path_base, header, rows, fmt="csv"):
    """Write CSV always; add a JSON twin when fmt='json'. Returns paths."""
    csv_path = str(path_base) + ".csv"
    write_csv(csv_path, header, rows)
    paths = [csv_path]
    if fmt == "json":
        json_path = str(path_base) + ".json"
        write_json_table(json_path, header, rows)
        paths.append(json_path)
    return paths
