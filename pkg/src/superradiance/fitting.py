#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``fitting`` module fits simple model curves to extracted results: two
Lorentzians to an emission spectrum (a sharp peak on a broad background) and
the scaling laws of pulse metrics with the atom number.
"""

from collections import namedtuple
import logging
import warnings

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import curve_fit, least_squares

logger = logging.getLogger(__name__)

MIN_SPECTRUM_POINTS = 32

# a background below this fraction of the peak counts as absent
DEGENERATE_FRACTION = 1e-3


LorentzianParams = namedtuple('LorentzianParams', 'max width center')
LorentzianParams.__doc__ = """
max : float
    peak value
width : float
    full width at half maximum
center : float
    peak position
"""


class TwoLorentzianFit(namedtuple('TwoLorentzianFit', (
        'peak background residual converged degenerate message'))):
    """
    Result of ``fit_two_lorentzians``.

    Attributes
    ----------
    peak : LorentzianParams
        the narrower Lorentzian
    background : LorentzianParams
        the broader Lorentzian (``max = 0`` for a degenerate fit)
    residual : float
        root mean square deviation of the fit
    converged : bool
        whether the least-squares solver reported success
    degenerate : bool
        True if the data are described by a single Lorentzian
    message : str
        solver status message
    """
    __slots__ = ()


def lorentzian(omegas, maximum, width, center):
    """``maximum / (1 + (2 (omega - center) / width)^2)``"""
    return maximum / (1.0 + (2.0 * (np.asarray(omegas) - center) / width) ** 2)


def _half_width(omegas, values, peak):
    """estimates the FWHM around ``peak`` from the half-maximum crossings"""
    half = values[peak] / 2.0
    below = np.flatnonzero(values <= half)
    lower = below[below < peak]
    upper = below[below > peak]
    left = omegas[lower[-1]] if lower.size else omegas[0]
    right = omegas[upper[0]] if upper.size else omegas[-1]
    width = right - left
    return width if width > 0 else omegas[-1] - omegas[0]


def _unpack(parameters, count):
    """positive amplitudes and widths are fitted as logarithms"""
    return [LorentzianParams(np.exp(parameters[3 * k]),
                             np.exp(parameters[3 * k + 1]),
                             parameters[3 * k + 2]) for k in range(count)]


def _fit(omegas, values, guesses):
    start = []
    for guess in guesses:
        start.extend([np.log(guess.max), np.log(guess.width), guess.center])

    def residuals(parameters):
        model = sum(lorentzian(omegas, *params)
                    for params in _unpack(parameters, len(guesses)))
        return model - values
    result = least_squares(residuals, np.array(start), method='lm',
                           x_scale='jac')
    rms = float(np.sqrt(np.mean(result.fun ** 2)))
    return _unpack(result.x, len(guesses)), rms, bool(result.success), \
        result.message


def fit_two_lorentzians(spectrum):
    """
    fits a sharp and a broad Lorentzian to a spectrum.

    The tallest point seeds the sharp peak. A single Lorentzian is fitted
    first; if its residual is negligible the fit is reported as degenerate.
    Otherwise the residual after removing the single fit seeds the
    background and both Lorentzians are fitted together with the
    Levenberg-Marquardt method.

    Parameters
    ----------
    spectrum : superradiance.observables.Spectrum or (omegas, values)
        at least 32 points spanning both features

    Returns
    -------
    fit : TwoLorentzianFit
    """
    omegas, values = (np.asarray(spectrum[0], dtype=float),
                      np.asarray(spectrum[1], dtype=float))
    if omegas.size < MIN_SPECTRUM_POINTS:
        raise ValueError(
            "A two-Lorentzian fit needs at least {} points, got {}".format(
                MIN_SPECTRUM_POINTS, omegas.size))
    peak = int(np.argmax(values))
    if values[peak] <= 0:
        raise ValueError("The spectrum has no positive peak")
    single_guess = LorentzianParams(values[peak],
                                    _half_width(omegas, values, peak),
                                    omegas[peak])
    (single,), single_rms, converged, message = _fit(omegas, values,
                                                     [single_guess])
    if single_rms < DEGENERATE_FRACTION * single.max:
        logger.info("spectrum is a single Lorentzian (rms %.3e)", single_rms)
        absent = LorentzianParams(0.0, np.inf, single.center)
        return TwoLorentzianFit(single, absent,
                                single_rms, converged, True, message)

    rest = np.clip(values - lorentzian(omegas, *single), 0.0, None)
    rest_max = max(rest.max(), DEGENERATE_FRACTION * single.max)
    area = trapezoid(rest, omegas)
    center = np.sum(omegas * rest) / rest.sum() if rest.sum() > 0 \
        else single.center
    background_guess = LorentzianParams(
        rest_max, max(2.0 * area / (np.pi * rest_max), 3.0 * single.width),
        center)
    peak_guess = LorentzianParams(max(single.max - background_guess.max,
                                      DEGENERATE_FRACTION * single.max),
                                  single.width, single.center)
    (first, second), rms, converged, message = _fit(
        omegas, values, [peak_guess, background_guess])
    sharp, broad = (first, second) if first.width <= second.width \
        else (second, first)
    degenerate = broad.max < DEGENERATE_FRACTION * sharp.max
    if not converged:
        warnings.warn("The two-Lorentzian fit did not converge: {} "
                      "(rms {:.3e})".format(message, rms))
    return TwoLorentzianFit(sharp, broad, rms, converged, degenerate, message)


PulseScaling = namedtuple('PulseScaling', 'peak_coefficients delay width')
PulseScaling.__doc__ = """
peak_coefficients : numpy.ndarray
    ``(c0, c1, c2)`` of ``I_max = c0 + c1 N + c2 N^2``
delay : tuple of float
    ``(a, b)`` of ``t0 = a ln(b N) / N``
width : tuple of float
    ``(c, d)`` of ``tau = c / (d + N)``
"""


def _delay_model(N, a, b):
    return a * np.log(b * N) / N


def _width_model(N, c, d):
    return c / (d + N)


def fit_pulse_scaling(atom_counts, I_max, t0, tau):
    """
    fits the atom-number dependence of pulse metrics: a quadratic
    polynomial for the peak intensity, ``a ln(b N) / N`` for the delay and
    ``c / (d + N)`` for the width.
    """
    N = np.asarray(atom_counts, dtype=float)
    peak = np.polyfit(N, np.asarray(I_max, dtype=float), 2)[::-1]
    delay, _ = curve_fit(_delay_model, N, np.asarray(t0, dtype=float),
                         p0=(1.0, 2.0), bounds=([0, 1e-6], [np.inf, np.inf]))
    width, _ = curve_fit(_width_model, N, np.asarray(tau, dtype=float),
                         p0=(2.0, 1.0), bounds=([0, -0.99 * N.min()],
                                                [np.inf, np.inf]))
    return PulseScaling(peak, tuple(delay), tuple(width))


def r_squared(x, y, degree=1):
    """coefficient of determination of a polynomial fit"""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    fitted = np.polyval(np.polyfit(x, y, degree), x)
    total = np.sum((y - y.mean()) ** 2)
    return 1.0 - np.sum((y - fitted) ** 2) / total if total else 1.0
