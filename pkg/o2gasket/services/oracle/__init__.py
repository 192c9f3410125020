# Independent brute-force cross-checks
