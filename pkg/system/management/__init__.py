# Management module for system app
