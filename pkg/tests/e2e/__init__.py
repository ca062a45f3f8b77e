# End-to-end tests for the voronoi-forge command line
