"""Locating the threshold region of an SNR curve."""
import numpy as np

from ssnmbounds.errors import ConfigError


def level_crossing_db(snr_db, values, level):
    """SNR (dB) where a decreasing curve last drops through ``level``, by linear interpolation."""
    snr_db = np.asarray(snr_db, dtype=float)
    values = np.asarray(values, dtype=float)
    above = np.flatnonzero(values >= level)
    if above.size == 0:
        return float(snr_db[0])
    i = int(above[-1])
    if i == values.size - 1:
        return float(snr_db[-1])
    v0, v1 = values[i], values[i + 1]
    frac = 0.0 if v0 == v1 else (v0 - level) / (v0 - v1)
    return float(snr_db[i] + frac * (snr_db[i + 1] - snr_db[i]))


def transition_fraction_db(snr_db, values, fraction, floor=None, peak=None):
    """SNR at which a curve has covered ``fraction`` of its drop from ``peak`` to ``floor``.

    ``peak`` defaults to the maximum and ``floor`` to the last value.
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigError("fraction must lie in (0, 1)")
    values = np.asarray(values, dtype=float)
    peak = float(np.max(values)) if peak is None else float(peak)
    floor = float(values[-1]) if floor is None else float(floor)
    return level_crossing_db(snr_db, values, peak - fraction * (peak - floor))


def transition_midpoint_db(snr_db, values, floor=None, peak=None):
    return transition_fraction_db(snr_db, values, 0.5, floor=floor, peak=peak)
