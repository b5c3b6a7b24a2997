# Management module for explore app
