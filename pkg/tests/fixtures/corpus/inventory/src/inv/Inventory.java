package inv;

import java.util.ArrayList;
import java.util.Arrays;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public class Inventory {
    private final List<Item> items = new ArrayList<>();
    private final Map<String, Item> byName = new HashMap<>();
    private int capacity;

    public Inventory(int capacity) {
        this.capacity = capacity;
    }

    public void add(Item item) {
        items.add(item);
        byName.put(item.getName(), item);
    }

    public Item find(String name) {
        return (Item) byName.get(name);
    }

    public boolean contains(String name) {
        return byName.containsKey(name);
    }

    public void restock(String name, int amount) {
        Item item = find(name);
        if (item != null) {
            item.setQuantity(amount);
        } else {
            add(new Item(name, amount, 0.0));
        }
    }

    public int[] quantities() {
        int[] out = new int[items.size()];
        for (int i = 0; i < out.length; i++) {
            Item it = (Item) items.get(i);
            out[i] = it.getQuantity();
        }
        return out;
    }

    public void fill(int[] target, int value) {
        Arrays.fill(target, value);
    }

    public void reset() {
        fill(new int[capacity], 0);
    }

    public int largest() {
        int[] q = quantities();
        int best = 0;
        for (int i = 0; i < q.length; i++) {
            best = Math.max(best, q[i]);
        }
        return best;
    }

    public void register(Registry registry) {
        registry.bind(Item.class, this);
        registry.bind(Inventory.class, null);
    }
}
