# Weight family services
