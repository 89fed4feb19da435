"""Print reference values for the special-function tests (mpmath, 40 digits)."""
import mpmath as mp

mp.mp.dps = 40

print("loggamma")
for z in [0.5, 5, 2.5 + 1j, -2.5, 0.1 + 3j, 30 - 4j, -3.7 + 0.2j]:
    v = mp.loggamma(z)
    print(repr(z), repr(complex(v)))

print("log barnes G")
for z in [0.1, 0.5, 1.7, 3.7, 9.99, 10.0, 12.5, 25.0, 60.0]:
    print(z, repr(float(mp.log(mp.barnesg(z)))))

print("zeta'(-1)", repr(float(mp.zeta(-1, derivative=1))))
print("ln glaisher", repr(float(mp.log(mp.glaisher))))
