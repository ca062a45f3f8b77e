"""Verification library for twisted Petersson, Voronoi and character-sum identities."""
