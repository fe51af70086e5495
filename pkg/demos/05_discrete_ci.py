# Discrete conditional independence on small tables.
from algstat.discrete_ci import CISignature, ci_signature, strict_model_search

for stmts in ([], ["1,2|"], ["1,2|3"], ["1,2|", "1,3|"]):
    target = CISignature.from_statements((2, 2, 2), stmts)
    T, info = strict_model_search(target, budget=50)
    if T is None:
        print(f"{stmts}: no witness ({info})")
        continue
    print(f"{stmts}: found at step {info['step']!r}, signature {ci_signature(T).to_json()['holds']}")
    print("   table:", [str(x) for x in T.entries])
