"""
Deterministic CSV serialisation of result tables.

Floats are written with 9 significant digits and ``.`` as decimal
separator; lines end in ``\\n`` on every platform.
"""

import pandas as pd

from harvestr.errors import ValidationError

FLOAT_FORMAT = "%.9g"

COEFFICIENT_COLUMNS = ["coil", "f_hz", "r_m", "k_uw_per_a2"]
POWER_COLUMNS = ["coil", "f_hz", "r_m", "i_a", "p_w"]
FIELD_COLUMNS = ["r_m", "re_m", "h_a_per_m", "b_t"]


def to_csv_text(df):
    """
    Render a table as CSV text.

    Args:
        df (pd.DataFrame): Table to render

    Returns:
        str: CSV text including the header line
    """
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_table(df, path):
    """Write ``df`` to ``path`` and return the CSV text written."""
    text = to_csv_text(df)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return text


def read_coefficient_table(path):
    """
    Read a coefficient table CSV.

    Args:
        path (str or Path): CSV file with header coil,f_hz,r_m,k_uw_per_a2

    Returns:
        pd.DataFrame: The coefficient table

    Raises:
        ValidationError: If the file is unreadable, has the wrong header or
            holds non-positive coefficients
    """
    try:
        df = pd.read_csv(
            path,
            comment="#",
            skipinitialspace=True,
            dtype={"coil": str},
            float_precision="round_trip",
        )
    except (OSError, ValueError) as e:
        raise ValidationError(f"Could not read coefficient table {path}: {e}") from e
    if list(df.columns) != COEFFICIENT_COLUMNS:
        raise ValidationError(
            f"Coefficient table {path} must have header {','.join(COEFFICIENT_COLUMNS)}"
        )
    if df.empty:
        raise ValidationError(f"Coefficient table {path} is empty")
    numeric = COEFFICIENT_COLUMNS[1:]
    try:
        df[numeric] = df[numeric].apply(pd.to_numeric, errors="raise")
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Coefficient table {path} has a non-numeric value: {e}") from e
    if df[numeric].isna().any().any():
        raise ValidationError(f"Coefficient table {path} has missing values")
    if not (df["k_uw_per_a2"] > 0).all():
        raise ValidationError(f"Coefficient table {path} has non-positive coefficients")
    return df
