"""Time derivatives of a DNLS solution from the equation itself:

  d_t^(n+1) u = i (Delta_h d_t^n u - lam d_t^n (|u|^(p-1) u)),

with |u|^(p-1) u = u^q conj(u)^(q-1), q = (p+1)/2, differentiated by the
Leibniz rule and d_t^n conj(u) = conj(d_t^n u).
"""
import numpy as np
from scipy.special import comb

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice.operators import laplacian_values
from dnls_lab.dynamics.ModelParams import TimeJet

# Largest modulus a jet layer may reach before we call it an overflow.
MAX_LAYER_MODULUS = 1e150


def product_jet(a, b, order):
  """Jet of a*b up to `order` from the jets a, b (lists of arrays)."""
  return [sum(comb(n, j, exact=True) * a[j] * b[n - j] for j in range(n + 1))
          for n in range(order + 1)]


def power_jet(jet, k, order):
  """Jet of the k-th power (k >= 1)."""
  out = jet[:order + 1]
  for _ in range(k - 1):
    out = product_jet(out, jet, order)
  return out


def nonlinearity_jet(layers, params, order):
  """[d_t^n (|u|^(p-1) u) for n = 0..order] as arrays (without lam)."""
  q = params.q
  conj_layers = [np.conj(l) for l in layers]
  return product_jet(power_jet(layers, q, order),
                     power_jet(conj_layers, q - 1, order), order)


def modulus_squared_jet(layers, order):
  """[d_t^n |u|^2 for n = 0..order]."""
  return product_jet(layers, [np.conj(l) for l in layers], order)


def _check_layer(v, n):
  with np.errstate(invalid='ignore'):
    peak = np.max(np.abs(v)) if v.size else 0.
  if not np.isfinite(peak) or peak > MAX_LAYER_MODULUS:
    raise OverflowError(
      'Time jet layer {} overflows (max modulus {})'.format(n, peak))


def time_jet_values(values, h, k, params):
  layers = [np.asarray(values, dtype=np.complex128)]
  for n in range(k):
    with np.errstate(over='ignore', invalid='ignore'):
      nxt = laplacian_values(layers[n], h)
      if params.lam != 0:
        nxt = nxt - params.lam * nonlinearity_jet(layers, params, n)[n]
      nxt = 1j * nxt
    _check_layer(nxt, n + 1)
    layers.append(nxt)
  return layers


def time_jet(u, k, params):
  """TimeJet [u, d_t u, ..., d_t^k u]."""
  if k < 0:
    raise ValueError('Jet order k={} must be >= 0'.format(k))
  params.check_grid(u.grid)
  layers = time_jet_values(u.values, u.grid.h, k, params)
  return TimeJet([u] + [GridFunction(u.grid, l) for l in layers[1:]])
