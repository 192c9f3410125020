# Asymptotic analysis services
