"""Spherical means and mean-value detectors for harmonic and panharmonic fields."""

from .fields import GridField, ScalarField, load_grid_field, make_field
from .geometry import Ball, Box, erode, parse_domain
from .means import iterated_mean, mean_field, spherical_mean
from .quadrature import sphere_rule
from .specialfn import invert_pan_coeff, pan_coeff

__all__ = [
    "Ball", "Box", "GridField", "ScalarField", "erode", "invert_pan_coeff", "iterated_mean",
    "load_grid_field", "make_field", "mean_field", "pan_coeff", "parse_domain",
    "sphere_rule", "spherical_mean",
]
