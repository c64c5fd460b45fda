"""Numerical laboratory for multicorrelation sequences with integer-part
polynomial iterates: polynomial brackets and fractional parts, torus and
Heisenberg systems, correlation engines, equidistribution densities,
Cesaro/prime averaging, and config-driven experiments."""

from ._nilcorr import (
    Poly,
    bracket,
    cesaro_average,
    config_errors,
    example_alpha,
    example_approx_errors,
    example_correlation,
    exceptional,
    fractional,
    heis_mul,
    heis_pow,
    hit_density,
    hit_density_primes,
    nil_reduce,
    parse_poly,
    prime_average,
    prime_pi,
    primes_upto,
    run_config,
    set_threads,
    weyl_sum,
    __version__,
)

__all__ = [
    "Poly",
    "bracket",
    "cesaro_average",
    "config_errors",
    "example_alpha",
    "example_approx_errors",
    "example_correlation",
    "exceptional",
    "fractional",
    "heis_mul",
    "heis_pow",
    "hit_density",
    "hit_density_primes",
    "nil_reduce",
    "parse_poly",
    "prime_average",
    "prime_pi",
    "primes_upto",
    "run_config",
    "set_threads",
    "weyl_sum",
    "__version__",
]
