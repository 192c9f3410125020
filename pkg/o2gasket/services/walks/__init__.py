# Random walk services
