import csv, collections
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
rows = list(csv.DictReader(open('decay_profiles.csv')))
by = collections.defaultdict(list)
for r in rows: by[(r['mode'], r['ray'])].append((float(r['dist']), float(r['norm'])))
for (m, ray), pts in sorted(by.items()):
    d, n = zip(*pts)
    plt.figure(); plt.semilogy(d, n, 'o-')
    plt.xlabel('dist to strip'); plt.ylabel('window norm'); plt.title(f'mode {m} ray {ray}')
    plt.savefig(f'decay_mode{m}_ray{ray}.png', dpi=100); plt.close()
