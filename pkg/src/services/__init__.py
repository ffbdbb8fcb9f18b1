"""Computation and certification services.

Each module exposes plain functions; import the module and call through it
(``from src.services import lattice_service``).
"""
