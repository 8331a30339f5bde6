package inv;

import java.util.HashMap;
import java.util.Map;

public class Registry {
    private final Map<Class, Object> owners = new HashMap<>();
    private String label;

    public void bind(Class type, Object owner) {
        owners.put(type, owner);
    }

    public Object lookup(Class type) {
        return owners.get(type);
    }

    public boolean isBound(Class type) {
        return owners.containsKey(type);
    }

    public void rename(String label) {
        if (label.isEmpty()) {
            System.out.println("empty label ignored");
        } else {
            this.label = label;
            System.out.println(this.label);
        }
    }

    public void describe(StringBuilder sb) {
        sb.append(label);
        sb.append(':');
        sb.append(owners.size());
        sb.append(true);
    }
}
