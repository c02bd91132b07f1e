# Tests package for qbernoulli
