# Tests for voronoi-forge
