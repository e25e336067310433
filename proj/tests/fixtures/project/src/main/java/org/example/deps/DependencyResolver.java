package org.example.deps;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.HashSet;
import java.util.List;
import java.util.Map;
import java.util.Optional;
import java.util.Set;

public class DependencyResolver {
    private final Map<String, List<String>> edges = new HashMap<>();
    private final Map<String, Specification> specs = new HashMap<>();

    /**
     * Check if sub-dependencies are resolved for a rule.
     *
     * @param rule the rule name
     * @param available specifications that are already known
     */
    public boolean hasUnresolvedDependencies(String rule, Map<String, Specification> available) {
        List<String> children = edges.get(rule);
        if (children == null || children.isEmpty()) {
            return false;
        }
        for (String child : children) {
            if (!available.containsKey(child)) {
                return true;
            }
            Specification spec = available.get(child);
            if (spec.isAbstract() && hasUnresolvedDependencies(child, available)) {
                return true;
            }
        }
        return false;
    }

    /**
     * Add dependencies for an entity based on its declared rules.
     */
    public void addDependencies(Entity entity, List<Rule> rules) {
        String name = entity.getName();
        List<String> targets = edges.computeIfAbsent(name, k -> new ArrayList<>());
        for (Rule r : rules) {
            if (!r.appliesTo(entity)) {
                continue;
            }
            for (String target : r.getTargets()) {
                if (!targets.contains(target)) {
                    targets.add(target);
                }
            }
        }
        specs.putIfAbsent(name, Specification.of(entity));
    }

    /**
     * Resolve the binding based on the type and provided specification.
     *
     * @param type the requested type
     * @param spec the specification to match
     * @return the binding when one matches
     */
    public Optional<Binding> resolveBinding(Class<?> type, Specification spec) {
        Binding best = null;
        int bestScore = -1;
        for (Specification candidate : specs.values()) {
            if (!candidate.provides(type)) {
                continue;
            }
            int score = candidate.matchScore(spec);
            if (score > bestScore) {
                bestScore = score;
                best = candidate.toBinding(type);
            }
        }
        return Optional.ofNullable(best);
    }

    /**
     * Orders the rules so that every rule comes after the rules it depends on.
     *
     * @return rule names in dependency order
     * @throws IllegalStateException on a cycle
     */
    public List<String> topologicalOrder() {
        List<String> order = new ArrayList<>();
        Set<String> done = new HashSet<>();
        Set<String> active = new HashSet<>();
        if (edges.isEmpty()) {
            return order;
        }
        for (String node : edges.keySet()) {
            visit(node, done, active, order);
        }
        return order;
    }

    private void visit(String node, Set<String> done, Set<String> active, List<String> order) {
        if (done.contains(node)) return;
        if (!active.add(node)) throw new IllegalStateException("cycle at " + node);
        for (String next : edges.getOrDefault(node, List.of())) visit(next, done, active, order);
        active.remove(node);
        done.add(node);
        order.add(node);
    }
}
