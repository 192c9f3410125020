# Series evaluation services
