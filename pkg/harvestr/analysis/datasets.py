"""
Laboratory reference data for Coils A and B.

The bench loop was driven at 16 2/3 Hz and 50 Hz with the coils 0.25 to
1.00 m from the near conductor. ``LAB_MODEL_COEFFICIENTS`` holds the model
curves drawn through those results (P = k * I^2, k in uW/A^2).
``LAB_MEASUREMENTS`` holds the measured matched-load power in uW at 25 A
steps; these are tagged ``source = measured``.
"""

import pandas as pd

from harvestr.models.magnetics import RAILWAY_HZ

LAB_LOOP_SEPARATION = 3.0  # m, near to far side of the bench loop
LAB_NOISE_VOLTAGE = 0.35  # V RMS induced by surrounding equipment

LAB_DISTANCES = (0.25, 0.5, 0.75, 1.0)
LAB_CURRENTS = (25, 50, 75, 100, 125, 150, 175, 200)

LAB_MODEL_COEFFICIENTS = {
    ("coil-a", RAILWAY_HZ): (
        0.10338819156701182,
        0.017314895626866153,
        0.00488928419540072,
        0.0017819709626767121,
    ),
    ("coil-b", RAILWAY_HZ): (
        0.0663763526819306,
        0.011116352857712564,
        0.0031389740665476204,
        0.001144044898115123,
    ),
    ("coil-a", 50.0): (
        0.9301216382429436,
        0.1557717457126405,
        0.04398596161452219,
        0.016031325492640327,
    ),
    ("coil-b", 50.0): (
        0.5971482909350695,
        0.10000716885158564,
        0.028239469681477194,
        0.010292286756641976,
    ),
}

LAB_MEASUREMENTS = {
    ("coil-a", RAILWAY_HZ, 0.25): (58.7, 237.2, 533.8, 974.9, 1512.2, 2234.9, 3098.3, 4151.3),
    ("coil-b", RAILWAY_HZ, 0.25): (48.1, 180.9, 402.8, 743.3, 1162.3, 1743.5, 2406.2, 3228.5),
    ("coil-a", RAILWAY_HZ, 0.5): (11.2, 41.5, 91.6, 163.1, 250.3, 373.6, 509.4, 680.0),
    ("coil-b", RAILWAY_HZ, 0.5): (9.8, 28.8, 62.0, 108.7, 168.5, 244.6, 334.8, 450.1),
    ("coil-a", RAILWAY_HZ, 0.75): (4.3, 12.3, 25.3, 44.5, 67.8, 99.8, 134.3, 179.1),
    ("coil-b", RAILWAY_HZ, 0.75): (5.0, 9.3, 18.0, 31.1, 45.9, 64.4, 89.0, 115.3),
    ("coil-a", RAILWAY_HZ, 1.0): (2.9, 6.1, 10.5, 17.3, 25.3, 36.3, 47.6, 64.7),
    ("coil-b", RAILWAY_HZ, 1.0): (4.0, 5.6, 8.9, 13.9, 18.7, 25.4, 32.9, 43.1),
    ("coil-a", 50.0, 0.25): (569.6, 2271.1, 5137.2, 9157.1, 14330.8, 21099.0, 28653.5, 40520.9),
    ("coil-b", 50.0, 0.25): (384.2, 1590.3, 3593.8, 6698.1, 10653.3, 15782.9, 21917.4, 29592.4),
    ("coil-a", 50.0, 0.5): (101.3, 400.6, 918.6, 1633.1, 2571.1, 3767.6, 5192.0, 6907.6),
    ("coil-b", 50.0, 0.5): (61.1, 246.2, 562.6, 1034.5, 1615.3, 2390.9, 3228.5, 4314.1),
    ("coil-a", 50.0, 0.75): (29.3, 114.0, 256.4, 457.4, 712.2, 1040.3, 1427.4, 1889.0),
    ("coil-b", 50.0, 0.75): (19.3, 67.0, 155.2, 269.6, 434.8, 644.5, 879.8, 1148.1),
    ("coil-a", 50.0, 1.0): (11.9, 42.0, 87.2, 161.2, 252.7, 369.2, 502.5, 672.1),
    ("coil-b", 50.0, 1.0): (11.4, 28.8, 58.7, 100.2, 155.2, 220.7, 305.0, 411.2),
}


def lab_coefficient_table():
    """
    Reference model coefficients as a coefficient table.

    Returns:
        pd.DataFrame: Columns coil, f_hz, r_m, k_uw_per_a2 in sweep row order
    """
    rows = [
        (coil, f_hz, r_m, k)
        for (coil, f_hz), ks in LAB_MODEL_COEFFICIENTS.items()
        for r_m, k in zip(LAB_DISTANCES, ks)
    ]
    df = pd.DataFrame(rows, columns=["coil", "f_hz", "r_m", "k_uw_per_a2"])
    return df.sort_values(["coil", "f_hz", "r_m"], kind="mergesort").reset_index(
        drop=True
    )


def lab_measurement_table():
    """
    Measured bench power as a power table.

    Returns:
        pd.DataFrame: Columns coil, f_hz, r_m, i_a, p_w, source
    """
    rows = [
        (coil, f_hz, r_m, float(i_a), p_uw * 1e-6, "measured")
        for (coil, f_hz, r_m), powers in LAB_MEASUREMENTS.items()
        for i_a, p_uw in zip(LAB_CURRENTS, powers)
    ]
    df = pd.DataFrame(rows, columns=["coil", "f_hz", "r_m", "i_a", "p_w", "source"])
    return df.sort_values(["coil", "f_hz", "r_m", "i_a"], kind="mergesort").reset_index(
        drop=True
    )
