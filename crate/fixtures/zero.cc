# the zero class
