"""Tempered spectrum of GL2(Q_p), tree orbital integrals and companion checks."""
